#include "gaugesep/separation.hpp"

#include "gaugesep/errors.hpp"
#include "gaugesep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace gaugesep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_space(const ConvexSet& a, const Subspace& s) {
    if (a.dim() != s.ambient_dim()) {
        throw InputError("separation: set lives in R^" + std::to_string(a.dim()) + " but S in R^" +
                         std::to_string(s.ambient_dim()));
    }
}

// Signed clearance from the range [lo, hi] of n . e over A.
Clearance clearance_from_range(double lo, double hi, double tol) {
    Clearance c;
    if (lo >= -tol) {
        c.value = lo;
        c.separated = true;
    } else if (hi <= tol) {
        c.value = -hi;
        c.separated = true;
    } else {
        c.value = -std::min(hi, -lo);
    }
    return c;
}

Vector pick_reference_point(const ConvexSet& a) {
    if (const auto* p = a.as_polyhedron(); p != nullptr && !a.witness()) {
        return chebyshev_ball(*p, 1.0).center;
    }
    return pick_interior_point(a);
}

}  // namespace

bool intersects_subspace(const ConvexSet& a, const Subspace& s, std::uint64_t seed, int samples) {
    require_same_space(a, s);
    const int n = a.dim();
    const int k = s.dim();
    if (a.contains(Vector::Zero(n))) return true;
    if (k == 0) return false;
    if (const auto* ball = a.as_ball()) return s.residual(ball->center) < ball->radius;
    if (const auto* poly = a.as_polyhedron()) {
        // maximize r  s.t.  a_i.(S c) / |a_i| + r <= b_i / |a_i|,  r <= 1.
        lp::Problem prob(k + 1);
        const Matrix as = poly->a * s.basis();
        for (int i = 0; i < poly->a.rows(); ++i) {
            const double norm = poly->a.row(i).norm();
            Vector row(k + 1);
            row.head(k) = as.row(i).transpose() / norm;
            row(k) = 1.0;
            prob.add_le(row, poly->b(i) / norm);
        }
        prob.add_le(Vector::Unit(k + 1, k), 1.0);
        prob.cost(k) = -1.0;
        const lp::Solution sol = lp::solve(prob);
        if (sol.status != lp::Status::Optimal) throw SolverError("disjointness LP: " + lp::to_string(sol.status));
        return sol.x(k) > 1e-12;
    }
    // Oracle sets: sampled only.
    if (a.witness() && a.contains(s.project(*a.witness()))) return true;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    for (int t = 0; t < samples; ++t) {
        Vector c(k);
        for (int i = 0; i < k; ++i) c(i) = normal(rng);
        c *= 10.0 * std::pow(unit(rng), 1.0 / k) / std::max(c.norm(), 1e-300);
        if (a.contains(s.basis() * c)) return true;
    }
    return false;
}

PipelineInstance prepare_pipeline(const ConvexSet& a, const Subspace& s, const SeparationOptions& options) {
    require_same_space(a, s);
    Vector x = options.anchor ? *options.anchor : pick_interior_point(a);
    if (x.size() != a.dim()) throw InputError("separation: anchor has wrong dimension");
    require_finite(x, "anchor");
    if (s.contains(x)) throw DegenerateError("separation: anchor lies in S");
    Seminorm p = gauge_of_body(a, x, options.gauge_mode, options.tol_gauge);

    std::vector<Vector> spanning;
    for (int i = 0; i < s.dim(); ++i) spanning.push_back(s.basis_vector(i));
    spanning.push_back(x);
    Subspace l = span_basis(spanning, a.dim());
    Vector values(l.dim());
    for (int i = 0; i < l.dim(); ++i) values(i) = decompose(l.basis_vector(i), s, x).t;
    return PipelineInstance{a, s, std::move(x), std::move(p), PartialFunctional(std::move(l), std::move(values))};
}

Clearance kernel_clearance(const ConvexSet& a, const Vector& normal, std::uint64_t seed, int samples) {
    if (normal.size() != a.dim()) throw InputError("clearance: normal has wrong dimension");
    if (const auto* ball = a.as_ball()) {
        Clearance c;
        c.value = std::abs(normal.dot(ball->center)) - ball->radius;
        c.separated = c.value >= -kTolClearance;
        c.exact = true;
        return c;
    }
    if (const auto* poly = a.as_polyhedron()) {
        // Range of n . e over the closure of A.
        double range[2] = {-kInf, kInf};
        for (int side = 0; side < 2; ++side) {
            const double sign = side == 0 ? 1.0 : -1.0;
            lp::Problem prob(a.dim());
            for (int i = 0; i < poly->a.rows(); ++i) prob.add_le(poly->a.row(i).transpose(), poly->b(i));
            prob.cost = sign * normal;
            const lp::Solution sol = lp::solve(prob);
            if (sol.status == lp::Status::Infeasible) return Clearance{kInf, true, true};
            if (sol.status == lp::Status::Optimal) range[side] = sign * sol.objective;
        }
        Clearance c = clearance_from_range(range[0], range[1], kTolClearance);
        c.exact = true;
        return c;
    }
    const std::vector<Vector> pts = sample_interior(a, samples, seed);
    if (pts.empty()) return Clearance{kInf, true, false};
    double lo = kInf;
    double hi = -kInf;
    for (const Vector& e : pts) {
        const double v = normal.dot(e);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Clearance c = clearance_from_range(lo, hi, 0.0);
    c.separated = c.value > 0.0;
    return c;
}

SeparationCertificate verify_separation(const ConvexSet& a, const Subspace& s, const Hyperplane& h,
                                        const VerifyOptions& options) {
    require_same_space(a, s);
    if (h.normal.size() != a.dim()) throw InputError("verify: normal has wrong dimension");
    const double nn = h.normal.norm();
    if (!(nn > 1e-12)) throw DegenerateError("verify: zero normal");
    const Vector normal = h.normal / nn;

    SeparationCertificate cert;
    for (int i = 0; i < s.dim(); ++i) {
        cert.s_in_h_residual = std::max(cert.s_in_h_residual, std::abs(normal.dot(s.basis_vector(i))));
    }
    const Clearance c = kernel_clearance(a, normal, options.seed, options.clearance_samples);
    cert.a_clearance = c.value;
    cert.a_separated = c.separated;
    cert.clearance_exact = c.exact;

    // H n B = {} means n . e keeps the sign of n . (point of A) over the whole cone B.
    if (!is_empty(a) && c.separated) {
        const Vector ref = pick_reference_point(a);
        const double side = normal.dot(ref) >= 0.0 ? 1.0 : -1.0;
        const double radius = 1.0 + ref.norm();
        std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> gauss;
        for (int t = 0; t < options.cone_samples; ++t) {
            Vector e(a.dim());
            for (int i = 0; i < e.size(); ++i) e(i) = gauss(rng);
            e = (t % 2 == 0) ? Vector(radius * e) : Vector(ref + 0.5 * ref.norm() * e);
            if (!conic_hull_membership(a, e)) continue;
            ++cert.cone_samples;
            if (side * normal.dot(e) < -kTolClearance * std::max(1.0, e.norm())) ++cert.cone_violations;
        }
    }
    cert.valid = cert.s_in_h_residual < kTolSubspaceResidual && (cert.a_clearance > 0.0 || cert.a_separated) &&
                 cert.cone_violations == 0;
    return cert;
}

SeparationResult separate(const ConvexSet& a, const Subspace& s, const SeparationOptions& options) {
    require_same_space(a, s);
    const int n = a.dim();
    SeparationResult result;

    if (is_empty(a)) {
        if (s.dim() >= n) throw DegenerateError("separate: S is the whole space, no hyperplane contains it");
        // S plus the first complement directions; the last complement direction is the normal.
        const std::vector<Vector> rest = complement_basis(s);
        result.empty_set_branch = true;
        result.g = rest.back();
        result.hyperplane = Hyperplane{rest.back()};
        result.certificate = verify_separation(a, s, result.hyperplane,
                                               VerifyOptions{options.seed, options.clearance_samples, 0});
        return result;
    }
    if (intersects_subspace(a, s, options.seed, options.disjointness_samples)) {
        throw InputError("separate: A meets S");
    }

    PipelineInstance inst = prepare_pipeline(a, s, options);
    ExtensionState state = extend_full_state(inst.f, inst.p, options.rule, options.extension);
    result.g = state.coefficients();
    result.hyperplane = kernel_hyperplane(result.g);
    result.interval_history = state.history();
    result.certificate = verify_separation(
        a, s, result.hyperplane, VerifyOptions{options.seed, options.clearance_samples, options.cone_samples});
    const Remark2Verdict verdict = remark2_equivalence_check(inst, result.g, options.seed, options.domination_trials);
    result.certificate.remark2_status = verdict.dominated == verdict.disjoint;
    result.anchor_x = inst.anchor;
    result.gauge_used = inst.p;
    return result;
}

Remark2Verdict remark2_equivalence_check(const PipelineInstance& instance, const Vector& g_candidate,
                                         std::uint64_t seed, int trials) {
    const Vector& g = g_candidate;
    if (g.size() != instance.a.dim()) throw InputError("remark2: candidate has wrong dimension");
    if (std::abs(g.dot(instance.anchor) - 1.0) > 1e-8) throw InputError("remark2: candidate does not map x to 1");
    for (int i = 0; i < instance.s.dim(); ++i) {
        if (std::abs(g.dot(instance.s.basis_vector(i))) > 1e-8) {
            throw InputError("remark2: candidate does not vanish on S");
        }
    }
    Remark2Verdict v;
    v.violation = domination_check(g, instance.p, seed, trials);
    v.dominated = v.violation <= kTolStepDomination;
    const Clearance c = kernel_clearance(instance.a, g / g.norm(), seed);
    v.clearance = c.value;
    v.disjoint = c.separated;
    return v;
}

double kernel_line_angle(const Vector& normal) {
    if (normal.size() != 2) throw InputError("kernel_line_angle: expected a 2-D normal");
    double theta = std::atan2(normal(0), -normal(1));
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    return theta;
}

std::vector<double> brute_force_2d_normals(const ConvexSet& a, int grid) {
    if (a.dim() != 2) throw InputError("brute_force_2d_normals: set must be 2-D");
    if (grid < 1) throw InputError("brute_force_2d_normals: grid must be positive");
    std::vector<double> out;
    for (int k = 0; k < grid; ++k) {
        const double theta = std::numbers::pi * k / grid;
        const Vector d{{std::cos(theta), std::sin(theta)}};
        const Vector nrm{{-d(1), d(0)}};
        bool hits = false;
        if (const auto* ball = a.as_ball()) {
            hits = std::abs(nrm.dot(ball->center)) < ball->radius;
        } else if (const auto* poly = a.as_polyhedron()) {
            // { s : s (a_i . d) < b_i } as an open interval.
            double lo = -kInf;
            double hi = kInf;
            bool empty = false;
            for (int i = 0; i < poly->a.rows(); ++i) {
                const double ad = poly->a.row(i).dot(d);
                const double b = poly->b(i);
                if (ad > 0.0) {
                    hi = std::min(hi, b / ad);
                } else if (ad < 0.0) {
                    lo = std::max(lo, b / ad);
                } else if (!(0.0 < b)) {
                    empty = true;
                }
            }
            hits = !empty && lo < hi;
        } else {
            constexpr int kPerSide = 4000;
            for (int j = 0; j <= kPerSide && !hits; ++j) {
                const double s = std::pow(10.0, -6.0 + 12.0 * j / kPerSide);
                hits = a.contains(s * d) || a.contains(-s * d);
            }
        }
        if (!hits) out.push_back(theta);
    }
    return out;
}

Vector extend_via_separation(const PartialFunctional& f, const Seminorm& p, const SeparationOptions& options) {
    const int n = p.dim();
    if (f.domain.ambient_dim() != n) throw InputError("extend_via_separation: dimension mismatch");
    if (f.is_zero()) return Vector::Zero(n);
    for (int i = 0; i < f.domain.dim(); ++i) {
        if (std::abs(f.values(i)) > p(f.domain.basis_vector(i)) + kTolStepDomination) {
            throw InputError("extend_via_separation: f not dominated by p");
        }
    }

    // Least-norm y in the domain with f(y) = 1.
    const Vector w = f.representer();
    const Vector y = w / w.squaredNorm();

    // Domination gives p(y) >= 1, so the origin sits on the boundary of { p(y - e) < 1 } when f is
    // tight at y. The level drops to p(y) when rounding says otherwise, and the active row is
    // pinned so that the origin stays outside.
    const double level = std::min(1.0, p(y));
    std::optional<ConvexSet> a;
    if (const auto rows = p.unit_ball_rows()) {
        // p(y - e) < level  <=>  -a_i . e < level b_i - a_i . y
        Vector rhs = level * rows->b - rows->a * y;
        Eigen::Index active = 0;
        (rows->a * y).cwiseQuotient(rows->b).maxCoeff(&active);
        rhs(active) = std::min(rhs(active), 0.0);
        a = ConvexSet::polyhedron(-rows->a, rhs, y);
    } else {
        OracleSet set;
        set.member = [p, y, level](const Vector& e) { return p(y - e) < level; };
        set.violation = [p, y, level](const Vector& e) { return p(y - e) - level; };
        set.name = "seminorm-ball";
        a = ConvexSet::oracle(n, std::move(set), y);
    }

    // Ker(f) inside the domain.
    const Vector w_hat = w.normalized();
    std::vector<Vector> kernel_span;
    for (int i = 0; i < f.domain.dim(); ++i) {
        const Vector b = f.domain.basis_vector(i);
        kernel_span.push_back(b - b.dot(w_hat) * w_hat);
    }
    const Subspace kernel = span_basis(kernel_span, n);

    SeparationOptions opts = options;
    opts.anchor = y;
    const SeparationResult sep = separate(*a, kernel, opts);

    // E = H + <y>; g(h + t y) = t.
    const Subspace hyper = span_basis(complement_basis(span_basis(std::vector<Vector>{sep.hyperplane.normal}, n)), n);
    Vector g(n);
    for (int i = 0; i < n; ++i) g(i) = decompose(Vector::Unit(n, i), hyper, y).t;

    for (int i = 0; i < f.domain.dim(); ++i) {
        const Vector b = f.domain.basis_vector(i);
        if (std::abs(g.dot(b) - f.values(i)) > 1e-8) {
            throw SolverError("extend_via_separation: reconstructed g does not extend f");
        }
    }
    const double violation = domination_check(g, p, options.seed, options.domination_trials);
    if (violation > kTolDirectSearch) {
        throw SolverError("extend_via_separation: reconstructed g violates domination by " + std::to_string(violation));
    }
    return g;
}

}  // namespace gaugesep
