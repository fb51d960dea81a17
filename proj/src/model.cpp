#include "ergodic/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ergodic/error.hpp"

namespace ergodic {

std::vector<double> ControlSet::grid() const {
    if (n_controls <= 1 || u_min == u_max) {
        return {u_min};
    }
    std::vector<double> out(n_controls);
    const double step = (u_max - u_min) / static_cast<double>(n_controls - 1);
    for (std::size_t k = 0; k < n_controls; ++k) {
        out[k] = u_min + static_cast<double>(k) * step;
    }
    out.back() = u_max;
    return out;
}

bool ControlSet::contains(double u, double slack) const noexcept {
    return std::isfinite(u) && u >= u_min - slack && u <= u_max + slack;
}

double ControlSet::clamp(double u) const noexcept { return std::clamp(u, u_min, u_max); }

void Problem::check_shape() const {
    if (!std::isfinite(controls.u_min) || !std::isfinite(controls.u_max) ||
        controls.u_min > controls.u_max) {
        throw ConfigError("control set requires finite u_min <= u_max");
    }
    if (controls.n_controls < 1) {
        throw ConfigError("control set requires n_controls >= 1");
    }
    (void)domain.grid();  // validates the domain
    if (!(tol.rho_tol > 0.0) || !(tol.residual_tol > 0.0) || !(tol.tail_mass_tol > 0.0) ||
        tol.max_iterations < 1 || !(tol.p_floor >= 0.0)) {
        throw ConfigError("tolerances must be positive and max_iterations >= 1");
    }
}

CoefficientTable tabulate(const Problem& p) {
    const Grid grid = p.grid();
    CoefficientTable t;
    t.controls = p.controls.grid();
    t.n_nodes = grid.size();
    const std::size_t total = t.controls.size() * t.n_nodes;
    t.drift.resize(total);
    t.half_var.resize(total);
    t.cost.resize(total);
    for (std::size_t k = 0; k < t.controls.size(); ++k) {
        const double u = t.controls[k];
        for (std::size_t i = 0; i < t.n_nodes; ++i) {
            const double x = grid.x(i);
            const double s = p.diffusion(u, x);
            const std::size_t idx = k * t.n_nodes + i;
            t.drift[idx] = p.drift(u, x);
            t.half_var[idx] = 0.5 * s * s;
            t.cost[idx] = p.cost(u, x);
        }
    }
    return t;
}

bool ValidationReport::ok() const noexcept { return first_fatal() == nullptr; }

const Check* ValidationReport::find(const std::string& name) const noexcept {
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

const Check* ValidationReport::first_fatal() const noexcept {
    for (const auto& c : checks) {
        if (!c.passed && c.severity == Severity::Fatal) {
            return &c;
        }
    }
    return nullptr;
}

std::optional<int> envelope_exponent(const Grid& grid, const std::vector<double>& g,
                                     std::size_t first, std::size_t last, int max_m) {
    double radius = 0.0;
    double scale = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        radius = std::max(radius, std::fabs(grid.x(i)));
        scale = std::max(scale, std::fabs(g[i]));
    }
    if (scale == 0.0) {
        return 0;
    }
    for (int m = 0; m <= max_m; ++m) {
        double inner = 0.0;
        double outer = 0.0;
        for (std::size_t i = first; i <= last; ++i) {
            const double ax = std::fabs(grid.x(i));
            const double ratio = std::fabs(g[i]) / (1.0 + std::pow(ax, m));
            double& slot = ax <= 0.5 * radius ? inner : outer;
            slot = std::max(slot, ratio);
        }
        if (outer <= 1.25 * inner + 1e-12 * scale) {
            return m;
        }
    }
    return std::nullopt;
}

namespace {

std::string fmt_point(double u, double x) {
    std::ostringstream os;
    os << "(u=" << u << ", x=" << x << ")";
    return os.str();
}

// Max difference quotient on spacing h versus 2h; a jump doubles it.
bool looks_smooth(const std::vector<double>& g, double h) {
    double fine = 0.0;
    double coarse = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        fine = std::max(fine, std::fabs(g[i + 1] - g[i]) / h);
    }
    for (std::size_t i = 0; i + 2 < g.size(); i += 2) {
        coarse = std::max(coarse, std::fabs(g[i + 2] - g[i]) / (2.0 * h));
    }
    return fine <= 1.5 * coarse + 1e-12;
}

}  // namespace

ValidationReport validate_problem(const Problem& p) {
    p.check_shape();
    ValidationReport report;
    const Grid grid = p.grid();
    const std::vector<double> us = p.controls.grid();

    report.checks.push_back({"control_set", Severity::Fatal, true,
                             "U = [" + std::to_string(p.controls.u_min) + ", " +
                                 std::to_string(p.controls.u_max) + "] with " +
                                 std::to_string(us.size()) + " grid point(s)",
                             {}, {}});

    CoefficientTable table;
    try {
        table = tabulate(p);
    } catch (const DomainError& e) {
        report.checks.push_back({"evaluation", Severity::Fatal, false, e.what(), {}, {}});
        return report;
    }
    report.checks.push_back(
        {"evaluation", Severity::Fatal, true, "coefficients finite on the sampled set", {}, {}});

    const std::size_t n = grid.size();

    // Non-degeneracy: |σ| bounded away from zero and from infinity.
    {
        double s_min = std::numeric_limits<double>::infinity();
        double s_max = 0.0;
        std::size_t k_min = 0, i_min = 0;
        for (std::size_t k = 0; k < us.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double s = std::sqrt(2.0 * table.a(k, i));
                if (s < s_min) {
                    s_min = s;
                    k_min = k;
                    i_min = i;
                }
                s_max = std::max(s_max, s);
            }
        }
        constexpr double kSigmaFloor = 1e-8;
        Check c{"non_degeneracy", Severity::Fatal, s_min > kSigmaFloor, "", {}, {}};
        if (c.passed) {
            report.sigma_bound = std::max(s_max, 1.0 / s_min);
            c.detail = "|sigma| in [" + std::to_string(s_min) + ", " + std::to_string(s_max) + "]";
        } else {
            report.sigma_bound = std::numeric_limits<double>::infinity();
            c.detail = "diffusion degenerates: |sigma| = " + std::to_string(s_min) + " at " +
                       fmt_point(us[k_min], grid.x(i_min));
            c.witness_u = us[k_min];
            c.witness_x = grid.x(i_min);
        }
        report.checks.push_back(std::move(c));
    }

    // Recurrence proxy: sup_u x*b(u,x) < 0 at both truncation points.
    {
        Check c{"recurrence", Severity::Fatal, true, "", {}, {}};
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            const double x = grid.x(i);
            for (std::size_t k = 0; k < us.size(); ++k) {
                const double val = x * table.b(k, i);
                if (val > worst) {
                    worst = val;
                    c.witness_u = us[k];
                    c.witness_x = x;
                }
            }
        }
        c.passed = worst < 0.0;
        c.detail = "max x*b(u,x) at the domain ends = " + std::to_string(worst) + " at " +
                   fmt_point(*c.witness_u, *c.witness_x);
        if (c.passed) {
            c.witness_u.reset();
            c.witness_x.reset();
        } else {
            c.detail = "drift is not restoring: " + c.detail;
        }
        report.checks.push_back(std::move(c));
    }

    // Bounded drift. Linear restoring drifts are standard, so only a warning.
    {
        std::vector<double> sup_b(n, 0.0);
        for (std::size_t k = 0; k < us.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                sup_b[i] = std::max(sup_b[i], std::fabs(table.b(k, i)));
            }
        }
        const auto m = envelope_exponent(grid, sup_b, 0, n - 1);
        Check c{"drift_bounded", Severity::Warning, m && *m == 0, "", {}, {}};
        c.detail = c.passed ? "drift bounded on the domain"
                            : "drift grows toward the domain ends (exponent " +
                                  (m ? std::to_string(*m) : std::string(">8")) + ")";
        report.checks.push_back(std::move(c));
    }

    // Polynomial growth of the running cost, uniform in u.
    {
        std::vector<double> sup_f(n, 0.0);
        for (std::size_t k = 0; k < us.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                sup_f[i] = std::max(sup_f[i], std::fabs(table.f(k, i)));
            }
        }
        const auto m = envelope_exponent(grid, sup_f, 0, n - 1);
        Check c{"cost_growth", Severity::Warning, m.has_value(), "", {}, {}};
        c.detail = m ? "sup_u |f| fits C(1+|x|^" + std::to_string(*m) + ")"
                     : "sup_u |f| grows faster than |x|^8 on the domain";
        report.checks.push_back(std::move(c));
    }

    // Smoothness in x of every coefficient for every control.
    {
        Check c{"smoothness", Severity::Warning, true, "coefficients look C^1 in x", {}, {}};
        const double h = grid.spacing();
        std::vector<double> row(n);
        const char* names[] = {"drift", "diffusion", "cost"};
        for (std::size_t k = 0; k < us.size() && c.passed; ++k) {
            for (int which = 0; which < 3 && c.passed; ++which) {
                for (std::size_t i = 0; i < n; ++i) {
                    row[i] = which == 0 ? table.b(k, i)
                           : which == 1 ? table.a(k, i)
                                        : table.f(k, i);
                }
                if (!looks_smooth(row, h)) {
                    c.passed = false;
                    c.witness_u = us[k];
                    c.detail = std::string(names[which]) + " appears discontinuous in x at u=" +
                               std::to_string(us[k]);
                }
            }
        }
        report.checks.push_back(std::move(c));
    }

    return report;
}

}  // namespace ergodic
