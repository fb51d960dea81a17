#include <cmath>
#include <string>

#include "doctest.h"

#include "ergodic/hjb.hpp"
#include "ergodic/howard.hpp"
#include "support.hpp"

using namespace ergodic;
using test::make_problem;

namespace {

ValueFunction zero_value(const Grid& g) {
    return ValueFunction{GridFunction(g), GridFunction(g), GridFunction(g), 0.0};
}

}  // namespace

TEST_CASE("zero data gives a zero residual") {
    const Problem p = make_problem("-u*x", "u", "0", 1, 2, 11, Domain{-8, 8, 401, 0.5});
    const auto r = bellman_residual(p, zero_value(p.grid()), 0.0);
    CHECK(sup_norm(r.full_form) == 0.0);
    CHECK(sup_norm(r.reduced_form) == 0.0);
    CHECK(r.sup_core == 0.0);
    CHECK(r.forms_consistent);
    CHECK(r.argmin_strategy == Strategy::constant(p.grid(), 1.0));
}

TEST_CASE("the zero function does not solve a quadratic-cost problem") {
    const Problem p = make_problem("-x", "sqrt(2)", "x*x", 0, 0, 1, Domain{-8, 8, 401, 0.5});
    const auto r = bellman_residual(p, zero_value(p.grid()), 0.0);
    for (std::size_t i = 0; i < p.grid().size(); ++i) {
        const double x = p.grid().x(i);
        CHECK(r.full_form[i] == x * x);
        CHECK(r.reduced_form[i] == doctest::Approx(x * x));
    }
    CHECK(r.sup_core == doctest::Approx(16.0));
    CHECK(r.sup_full == doctest::Approx(64.0));
}

TEST_CASE("reduced form divides by the diffusion before minimizing") {
    const Problem p = make_problem("0", "u", "u", 1, 2, 2, Domain{-1, 1, 3, 1.0});
    ValueFunction vf = zero_value(p.grid());
    vf.d2v = GridFunction(p.grid(), 1.0);
    const auto r = bellman_residual(p, vf, 0.0);
    // full: min(0.5 + 1, 2 + 2) = 1.5; reduced: 1 + min(1/0.5, 2/2) = 2
    CHECK(r.full_form[1] == doctest::Approx(1.5));
    CHECK(r.reduced_form[1] == doctest::Approx(2.0));
    CHECK(r.argmin_strategy[1] == 1.0);
    CHECK(r.forms_consistent);
}

TEST_CASE("converged solves solve the HJB equation") {
    for (const std::string name : test::kCatalog) {
        CAPTURE(name);
        const Problem p = test::catalog(name);
        const auto s = solve(p, initial_strategy(p));
        REQUIRE(s.converged);
        const auto v = verify_solution(p, s.evaluation.value, s.rho_tilde);
        CHECK(v.residual.sup_core <= p.tol.residual_tol);
        CHECK(v.residual.forms_consistent);
        CHECK(v.residual_ok);
        CHECK(v.envelope_exponent.has_value());
        CHECK(std::isfinite(v.lipschitz_d2v));
        CHECK(v.lipschitz_d2v >= 0.0);
        CHECK(v.verified);
    }
}

TEST_CASE("shifting rho shifts the full form by exactly that amount") {
    const Problem p = test::catalog("tanh_drift");
    const auto s = solve(p, initial_strategy(p));
    const auto base = bellman_residual(p, s.evaluation.value, s.rho_tilde);
    const auto shifted = bellman_residual(p, s.evaluation.value, s.rho_tilde + 0.1);
    for (std::size_t i = 0; i < base.full_form.size(); ++i) {
        CHECK(std::fabs(shifted.full_form[i] - base.full_form[i] + 0.1) <= 1e-12);
    }
    const auto v = verify_solution(p, s.evaluation.value, s.rho_tilde + 0.1);
    CHECK_FALSE(v.verified);
    CHECK(v.residual.sup_core == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("residuals ignore additive constants in v") {
    const Problem p = test::catalog("mixed_control");
    const auto s = solve(p, initial_strategy(p));
    ValueFunction moved = s.evaluation.value;
    for (double& v : moved.v.values) {
        v += 12.5;
    }
    const auto a = verify_solution(p, s.evaluation.value, s.rho_tilde);
    const auto b = verify_solution(p, moved, s.rho_tilde);
    CHECK(a.residual.full_form.values == b.residual.full_form.values);
    CHECK(a.residual.reduced_form.values == b.residual.reduced_form.values);
    CHECK(a.verified == b.verified);
    CHECK(a.envelope_exponent == b.envelope_exponent);
}

TEST_CASE("at every iterate the minimized operator is non-positive") {
    Problem p = test::catalog("drift_control");
    Strategy alpha = Strategy::constant(p.grid(), 2.0);
    for (int n = 0; n < 3; ++n) {
        const auto ev = evaluate(p, alpha);
        const auto r = bellman_residual(p, ev.value, ev.rho);
        const Grid g = p.grid();
        for (std::size_t i = g.core_first(); i <= g.core_last(); ++i) {
            CHECK(r.full_form[i] <= p.tol.residual_tol);
        }
        CHECK(r.forms_consistent);
        alpha = r.argmin_strategy;
    }
}

TEST_CASE("full and reduced forms vanish together") {
    const Problem p = test::catalog("diffusion_control");
    const auto s = solve(p, initial_strategy(p));
    const auto r = bellman_residual(p, s.evaluation.value, s.rho_tilde);
    const double a_min = 0.5 * 0.5 * 0.5;
    const Grid g = p.grid();
    for (std::size_t i = g.core_first(); i <= g.core_last(); ++i) {
        CHECK(std::fabs(r.reduced_form[i]) <= std::fabs(r.full_form[i]) / a_min + 1e-9);
    }
}
