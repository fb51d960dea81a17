#pragma once

#include <optional>

#include "ergodic/density.hpp"
#include "ergodic/grid.hpp"
#include "ergodic/model.hpp"
#include "ergodic/poisson.hpp"

namespace ergodic {

/**
 * Ergodic Bellman operator evaluated node-wise on a candidate (v, ρ):
 *
 *     full_form(x)    = min_u [ a(u,x) v'' + b(u,x) v' + f(u,x) - ρ ]
 *     reduced_form(x) = v'' + min_u [ (b v' + f - ρ) / a ](u,x)
 *
 * Both vanish exactly where the pair solves the ergodic HJB equation.
 */
struct BellmanResidual {
    GridFunction full_form;
    GridFunction reduced_form;
    Strategy argmin_strategy;   ///< full-form minimizer, smallest u on ties
    double sup_core = 0.0;      ///< sup |full_form| on the core
    double sup_full = 0.0;      ///< sup |full_form| on the whole grid
    double reduced_sup_core = 0.0;
    /// At every core node reduced_form lies between full_form / max_u a and
    /// full_form / min_u a, up to round-off.
    bool forms_consistent = true;
};

BellmanResidual bellman_residual(const Problem& p, const ValueFunction& vf, double rho);
BellmanResidual bellman_residual(const Problem& p, const CoefficientTable& table,
                                 const ValueFunction& vf, double rho);

struct VerificationReport {
    BellmanResidual residual;
    std::optional<int> envelope_exponent;  ///< growth exponent of |v| + |v'|
    double lipschitz_d2v = 0.0;            ///< local Lipschitz estimate of v''
    bool residual_ok = false;
    bool verified = false;
};

/**
 * Checks that (v, ρ) solves the ergodic HJB equation on the core: sup-core
 * residual within residual_tol, consistent full and reduced forms, polynomial
 * growth of v and v', and a finite local Lipschitz constant for v'' weighted
 * by (1 + |x|^m + |x'|^m).
 */
VerificationReport verify_solution(const Problem& p, const ValueFunction& vf, double rho);

}  // namespace ergodic
