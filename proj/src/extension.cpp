#include "gaugesep/extension.hpp"

#include "gaugesep/errors.hpp"
#include "gaugesep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace gaugesep {
namespace {

// min over c of sign * (w . c) + p(B c + z) through the LP
//   minimize sign * w.c + t   s.t.  a_i.(B c + z) <= b_i t,  t >= 0.
// With `bound` > 0 the coordinates are also boxed to |c_i| <= bound.
lp::Solution solve_interval_lp(const Matrix& ab, const Vector& az, const Vector& b, const Vector& w, double sign,
                               double bound) {
    const int k = static_cast<int>(ab.cols());
    lp::Problem prob(k + 1);
    for (int i = 0; i < ab.rows(); ++i) {
        Vector row(k + 1);
        row.head(k) = ab.row(i).transpose();
        row(k) = -b(i);
        prob.add_le(row, -az(i));
    }
    prob.add_le(-Vector::Unit(k + 1, k), 0.0);
    if (bound > 0.0) {
        for (int i = 0; i < k; ++i) {
            prob.add_le(Vector::Unit(k + 1, i), bound);
            prob.add_le(-Vector::Unit(k + 1, i), bound);
        }
    }
    prob.cost.head(k) = sign * w;
    prob.cost(k) = 1.0;
    return lp::solve(prob);
}

double minimize_lp(const UnitBallRows& rows, const Matrix& basis, const Vector& w, const Vector& z, double sign) {
    const int k = static_cast<int>(basis.cols());
    const Matrix ab = rows.a * basis;
    const Vector az = rows.a * z;
    lp::Solution sol = solve_interval_lp(ab, az, rows.b, w, sign, 0.0);
    if (sol.status == lp::Status::Unbounded && k > 0) {
        // The objective is homogeneous along recession directions of G, so a rounding-level
        // domination defect left by earlier steps reads as a ray. Retry inside a wide box and
        // accept only if the slope along the box-hitting direction is at rounding level.
        const double bound = 1e6 * (1.0 + z.norm());
        sol = solve_interval_lp(ab, az, rows.b, w, sign, bound);
        if (sol.status == lp::Status::Optimal) {
            const Vector c = sol.x.head(k);
            const Vector dir = c / c.norm();
            const double slope = sign * w.dot(dir) + std::max(0.0, ((ab * dir).array() / rows.b.array()).maxCoeff());
            if (slope < -1e-9 * (1.0 + w.norm())) {
                throw SolverError("extension interval: objective decreases without bound along a recession "
                                  "direction of the gauge (slope " + std::to_string(slope) +
                                  "); the functional is not dominated");
            }
        }
    }
    if (sol.status != lp::Status::Optimal) {
        throw SolverError("extension interval: LP is " + lp::to_string(sol.status) + " (" +
                          std::to_string(rows.a.rows()) + " rows, " + std::to_string(k) +
                          " subspace coordinates); the functional is likely not dominated");
    }
    return sol.objective;
}

// Smallest-norm point of the convex hull of the columns of g, by projected gradient on
// the simplex of weights.
Vector min_norm_hull_point(const Matrix& g) {
    const int m = static_cast<int>(g.cols());
    const Matrix gram = g.transpose() * g;
    const double lipschitz = std::max(gram.trace(), 1e-300);
    Vector lambda = Vector::Constant(m, 1.0 / m);
    for (int it = 0; it < 200; ++it) {
        Vector y = lambda - (gram * lambda) / lipschitz;
        // Euclidean projection onto the simplex.
        Vector sorted = y;
        std::sort(sorted.data(), sorted.data() + m, std::greater<>());
        double cumulative = 0.0;
        double theta = 0.0;
        for (int i = 0; i < m; ++i) {
            cumulative += sorted(i);
            const double candidate = (cumulative - 1.0) / (i + 1);
            if (sorted(i) - candidate > 0.0) theta = candidate;
        }
        const Vector next = (y.array() - theta).max(0.0).matrix();
        const double change = (next - lambda).cwiseAbs().maxCoeff();
        lambda = next;
        if (change < 1e-12) break;
    }
    return g * lambda;
}

// Pattern search over coordinate and pairwise-diagonal directions with restarts.
double minimize_direct(const Seminorm& p, const Matrix& basis, const Vector& w, const Vector& z, double sign,
                       const ExtensionOptions& options) {
    const int k = static_cast<int>(basis.cols());
    // Moves must beat the evaluation noise of the gauge, which is relative to the size
    // of the two cancelling terms.
    const bool oracle = std::holds_alternative<OracleGauge>(p.rep());
    const double noise = oracle ? 4.0 * std::get<OracleGauge>(p.rep()).tol : 1e-15;
    struct Eval {
        double value;
        double magnitude;
    };
    auto objective = [&](const Vector& c) {
        const double lin = sign * w.dot(c);
        const double pc = p(basis * c + z);
        return Eval{lin + pc, std::abs(lin) + pc};
    };

    std::vector<Vector> directions;
    for (int i = 0; i < k; ++i) {
        directions.push_back(Vector::Unit(k, i));
        directions.push_back(-Vector::Unit(k, i));
        for (int j = i + 1; j < k; ++j) {
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    Vector d = Vector::Zero(k);
                    d(i) = si;
                    d(j) = sj;
                    directions.push_back(d / std::sqrt(2.0));
                }
            }
        }
    }

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    const double scale = 1.0 + z.norm();
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        Vector c = Vector::Zero(k);
        if (r > 0) {
            for (int i = 0; i < k; ++i) c(i) = scale * normal(rng);
        }
        double value = objective(c).value;
        double step = scale;
        for (int it = 0; it < options.iterations && step > 1e-12 * scale; ++it) {
            bool improved = false;
            auto try_move = [&](const Vector& d) {
                const Vector trial = c + step * d;
                const Eval v = objective(trial);
                if (v.value < value - noise * v.magnitude) {
                    c = trial;
                    value = v.value;
                    return true;
                }
                return false;
            };
            for (const Vector& d : directions) {
                if ((improved = try_move(d))) break;
            }
            // At a kink of the gauge every fixed direction can fail. Sample one-sided
            // gradients around c and descend along the smallest element of their hull.
            // One coordinate needs no help, and oracle noise swamps differences at tiny steps.
            if (!improved && k >= 2 && step > (oracle ? 1e-6 : 0.0) * scale) {
                const double delta = 1e-2 * step;
                const int samples = 2 * k + 2;
                Matrix grads(k, samples);
                for (int j = 0; j < samples; ++j) {
                    Vector y = c;
                    if (j > 0) {
                        Vector u(k);
                        for (int i = 0; i < k; ++i) u(i) = normal(rng);
                        y += 0.5 * step * u.normalized();
                    }
                    const double fy = objective(y).value;
                    for (int i = 0; i < k; ++i) {
                        grads(i, j) = (objective(y + delta * Vector::Unit(k, i)).value - fy) / delta;
                    }
                }
                const Vector d = min_norm_hull_point(grads);
                if (d.norm() > 0.0) {
                    for (double t : {1.0, 0.25, 0.0625}) {
                        if ((improved = try_move(-t * d.normalized()))) break;
                    }
                }
            }
            step = improved ? std::min(2.0 * step, 1e6 * scale) : 0.5 * step;
        }
        best = std::min(best, value);
    }
    return best;
}

}  // namespace

GammaRule parse_gamma_rule(const std::string& name) {
    if (name == "upper") return GammaRule::Upper;
    if (name == "lower") return GammaRule::Lower;
    if (name == "midpoint") return GammaRule::Midpoint;
    throw InputError("unknown gamma rule '" + name + "' (expected upper, lower or midpoint)");
}

std::string to_string(GammaRule rule) {
    switch (rule) {
        case GammaRule::Upper: return "upper";
        case GammaRule::Lower: return "lower";
        case GammaRule::Midpoint: return "midpoint";
    }
    return "upper";
}

double GammaInterval::pick(GammaRule rule) const {
    switch (rule) {
        case GammaRule::Upper: return hi;
        case GammaRule::Lower: return lo;
        case GammaRule::Midpoint: return 0.5 * (lo + hi);
    }
    return hi;
}

ExtensionState::ExtensionState(PartialFunctional functional, Seminorm seminorm)
    : functional_(std::move(functional)), seminorm_(std::move(seminorm)) {
    if (functional_.domain.ambient_dim() != seminorm_.dim()) {
        throw InputError("extension: functional and seminorm live in different dimensions");
    }
}

ExtensionState ExtensionState::with_direction(const Vector& z, double gamma, GammaInterval interval) const {
    const Subspace next = domain().extended_by(z);
    const int k = domain().dim();
    // z = P_G z + |r| b_new, so g(b_new) = (gamma - g(P_G z)) / |r|.
    const Vector r = z - domain().project(z);
    const double along = k == 0 ? 0.0 : functional_.values.dot(domain().basis().transpose() * z);
    Vector values(k + 1);
    values.head(k) = functional_.values;
    values(k) = (gamma - along) / r.norm();

    ExtensionState out(PartialFunctional(next, std::move(values)), seminorm_);
    out.history_ = history_;
    out.history_.push_back(ExtensionStep{z, gamma, interval});
    return out;
}

GammaInterval extension_interval(const ExtensionState& state, const Vector& z, const ExtensionOptions& options) {
    const Seminorm& p = state.seminorm();
    if (z.size() != p.dim()) throw InputError("extension interval: direction has wrong dimension");
    require_finite(z, "extension direction");
    if (state.domain().contains(z)) throw DegenerateError("extension interval: direction lies in the current domain");

    const Matrix& basis = state.domain().basis();
    const Vector& w = state.functional().values;
    if (basis.cols() == 0) {
        const double pz = p(z);
        return GammaInterval{-pz, pz};
    }

    IntervalMethod method = options.method;
    const std::optional<UnitBallRows> rows = p.unit_ball_rows();
    if (method == IntervalMethod::Auto) method = rows ? IntervalMethod::LinearProgram : IntervalMethod::DirectSearch;
    if (method == IntervalMethod::LinearProgram && !rows) {
        throw InputError("extension interval: LP path needs a polyhedral or explicit gauge");
    }

    GammaInterval out;
    if (method == IntervalMethod::LinearProgram) {
        out.hi = minimize_lp(*rows, basis, w, z, -1.0);
        out.lo = -minimize_lp(*rows, basis, w, z, 1.0);
    } else {
        out.hi = minimize_direct(p, basis, w, z, -1.0, options);
        out.lo = -minimize_direct(p, basis, w, z, 1.0, options);
    }
    return out;
}

namespace {

ExtensionState extend_step(const ExtensionState& state, const Vector& z, GammaRule rule,
                           const ExtensionOptions& options, bool final_step) {
    const GammaInterval interval = extension_interval(state, z, options);
    double gamma = interval.pick(rule);
    // An endpoint pick makes g touch p along some ray; with a smooth gauge every later interval
    // then collapses to a point whose infimum sits at infinity, out of reach of the direct search.
    // Intermediate picks on that path therefore stay a fraction of the width inside.
    const bool direct = options.method == IntervalMethod::DirectSearch ||
                        (options.method == IntervalMethod::Auto && !state.seminorm().unit_ball_rows());
    if (direct && !final_step && state.domain().dim() > 0) {
        const double margin = kIntermediateMargin * interval.width();
        gamma = std::clamp(gamma, interval.lo + margin, interval.hi - margin);
    }
    ExtensionState next = state.with_direction(z, gamma, interval);

    const double slack = kTolStepDomination + (next.seminorm().is_oracle() ? kTolDirectSearch : 0.0);
    const Subspace& dom = next.domain();
    for (int i = 0; i < dom.dim(); ++i) {
        const Vector b = dom.basis_vector(i);
        const double excess = std::abs(next.functional().values(i)) - next.seminorm()(b);
        if (excess > slack) {
            throw SolverError("extend_one: domination lost on basis vector " + std::to_string(i) + " by " +
                              std::to_string(excess));
        }
    }
    return next;
}

}  // namespace

ExtensionState extend_one(const ExtensionState& state, const Vector& z, GammaRule rule,
                          const ExtensionOptions& options) {
    return extend_step(state, z, rule, options, true);
}

ExtensionState extend_full_state(const PartialFunctional& f, const Seminorm& p, GammaRule rule,
                                 const ExtensionOptions& options) {
    for (int i = 0; i < f.domain.dim(); ++i) {
        const Vector b = f.domain.basis_vector(i);
        if (std::abs(f.values(i)) > p(b) + kTolStepDomination) {
            throw InputError("extend_full: f not dominated by p on domain basis vector " + std::to_string(i));
        }
    }
    ExtensionState state(f, p);
    const std::vector<Vector> directions = complement_basis(f.domain);
    for (std::size_t i = 0; i < directions.size(); ++i) {
        state = extend_step(state, directions[i], rule, options, i + 1 == directions.size());
    }
    return state;
}

Vector extend_full(const PartialFunctional& f, const Seminorm& p, GammaRule rule, const ExtensionOptions& options) {
    return extend_full_state(f, p, rule, options).coefficients();
}

double domination_check(const Vector& g, const Seminorm& p, std::uint64_t seed, int trials) {
    if (trials < 1) throw InputError("domination_check: trials must be at least 1");
    if (g.size() != p.dim()) throw InputError("domination_check: functional has wrong dimension");
    const int n = p.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double worst = -std::numeric_limits<double>::infinity();
    Vector best = Vector::Unit(n, 0);
    double best_g = 0.0;
    double best_p = 1.0;
    for (int k = 0; k < trials; ++k) {
        Vector e(n);
        for (int i = 0; i < n; ++i) e(i) = normal(rng);
        const double norm = e.norm();
        if (norm == 0.0) continue;
        e /= norm;
        worst = std::max(worst, std::abs(g.dot(e)) - p(e));
        if (std::abs(g.dot(e)) * best_p > best_g * p(e)) {
            best = e * (g.dot(e) < 0.0 ? -1.0 : 1.0);
            best_g = std::abs(g.dot(e));
            best_p = p(e);
        }
    }

    if (const auto rows = p.unit_ball_rows(); !rows) {
        // g.e / p(e) is quasiconcave where g.e > 0, so ascent from the best sample reaches the sup.
        auto ratio = [&](const Vector& e) {
            const double pe = p(e);
            const double ge = g.dot(e);
            if (pe <= 0.0) return ge > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            return ge / pe;
        };
        for (const Vector& start : {best, Vector(g.norm() > 0.0 ? Vector(g.normalized()) : best)}) {
            Vector e = start;
            double r = ratio(e);
            for (double step = 0.25; step > 1e-10 && std::isfinite(r);) {
                bool moved = false;
                for (int k = 0; k < 4 * n && !moved; ++k) {
                    Vector d = k < 2 * n ? Vector(Vector::Unit(n, k / 2) * (k % 2 ? -1.0 : 1.0)) : Vector(n);
                    if (k >= 2 * n) {
                        for (int i = 0; i < n; ++i) d(i) = normal(rng);
                        d.normalize();
                    }
                    const Vector c = (e + step * d).normalized();
                    const double rc = ratio(c);
                    if (rc > r) {
                        e = c;
                        r = rc;
                        moved = true;
                    }
                }
                if (!moved) step *= 0.5;
            }
            worst = std::max(worst, std::abs(g.dot(e)) - p(e));
        }
    } else {
        // maximize sign*g.e - t  s.t.  a_i.e <= b_i t, t >= 0, |e_j| <= 1.
        for (double sign : {1.0, -1.0}) {
            lp::Problem prob(n + 1);
            for (int i = 0; i < rows->a.rows(); ++i) {
                Vector row(n + 1);
                row.head(n) = rows->a.row(i).transpose();
                row(n) = -rows->b(i);
                prob.add_le(row, 0.0);
            }
            prob.add_le(-Vector::Unit(n + 1, n), 0.0);
            for (int j = 0; j < n; ++j) {
                prob.add_le(Vector::Unit(n + 1, j), 1.0);
                prob.add_le(-Vector::Unit(n + 1, j), 1.0);
            }
            prob.cost.head(n) = -sign * g;
            prob.cost(n) = 1.0;
            const lp::Solution sol = lp::solve(prob);
            if (sol.status != lp::Status::Optimal) continue;
            const Vector e = sol.x.head(n);
            const double norm = e.norm();
            if (norm <= 1e-12) continue;
            worst = std::max(worst, (std::abs(g.dot(e)) - p(e)) / norm);
        }
    }
    return worst;
}

}  // namespace gaugesep
