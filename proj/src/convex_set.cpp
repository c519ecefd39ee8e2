#include "gaugesep/convex_set.hpp"

#include "gaugesep/errors.hpp"
#include "gaugesep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gaugesep {
namespace {

constexpr double kInvPhi = 0.61803398874989484820;

void require_dim(const ConvexSet& a, const Vector& e) {
    if (e.size() != a.dim()) {
        throw InputError("convex set: point of dimension " + std::to_string(e.size()) + " for a set in R^" +
                         std::to_string(a.dim()));
    }
}

// alpha * v(e / alpha), convex in alpha whenever v is convex (perspective).
double scaled_violation(const ConvexSet& a, const Vector& e, double alpha) {
    return alpha * *a.violation(e / alpha);
}

// Membership scan on a logarithmic grid of dilation factors, for oracles without a violation function.
bool conic_scan(const ConvexSet& a, const Vector& e) {
    const double hi = std::log(a.ray_bound());
    const double lo = -hi;
    constexpr int kSteps = 4000;
    for (int k = 0; k <= kSteps; ++k) {
        const double alpha = std::exp(lo + (hi - lo) * k / kSteps);
        if (a.contains(e / alpha)) return true;
    }
    return false;
}

// Largest t in [0, cap] with u + t d in A, for u in A.
double chord_end(const ConvexSet& a, const Vector& u, const Vector& d, double cap) {
    if (const auto* p = a.as_polyhedron()) {
        double t = cap;
        const Vector ad = p->a * d;
        const Vector slack = p->b - p->a * u;
        for (int i = 0; i < ad.size(); ++i) {
            if (ad(i) > 0.0) t = std::min(t, slack(i) / ad(i));
        }
        return t;
    }
    if (const auto* ball = a.as_ball()) {
        const Vector w = u - ball->center;
        const double bq = w.dot(d);
        const double cq = w.squaredNorm() - ball->radius * ball->radius;
        const double dd = d.squaredNorm();
        const double disc = std::max(0.0, bq * bq - dd * cq);
        return std::min(cap, (-bq + std::sqrt(disc)) / dd);
    }
    double in = 0.0;
    double out = 1.0;
    while (a.contains(u + out * d)) {
        in = out;
        out *= 2.0;
        if (out >= cap) {
            if (a.contains(u + cap * d)) return cap;
            out = cap;
            break;
        }
    }
    for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (in + out);
        (a.contains(u + mid * d) ? in : out) = mid;
    }
    return in;
}

}  // namespace

ConvexSet::ConvexSet(int dim, Rep rep, std::optional<Vector> witness)
    : dim_(dim), rep_(std::move(rep)), witness_(std::move(witness)) {
    if (dim_ <= 0) throw InputError("convex set: dimension must be positive");
    if (witness_) {
        if (witness_->size() != dim_) throw InputError("convex set: witness has wrong dimension");
        require_finite(*witness_, "convex set witness");
    }
}

ConvexSet ConvexSet::polyhedron(Matrix a, Vector b, std::optional<Vector> witness) {
    if (a.rows() != b.size()) throw InputError("polyhedron: row count differs from right-hand side length");
    if (a.cols() <= 0) throw InputError("polyhedron: rows must have positive length");
    if (!a.allFinite() || !b.allFinite()) throw InputError("polyhedron: non-finite data");
    for (int i = 0; i < a.rows(); ++i) {
        if (a.row(i).norm() <= 0.0) throw InputError("polyhedron: row " + std::to_string(i) + " is zero");
    }
    const int dim = static_cast<int>(a.cols());
    return ConvexSet(dim, HPolyhedron{std::move(a), std::move(b)}, std::move(witness));
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball: radius must be positive and finite");
    const int dim = static_cast<int>(center.size());
    return ConvexSet(dim, OpenBall{std::move(center), radius}, std::nullopt);
}

ConvexSet ConvexSet::oracle(int dim, OracleSet set, std::optional<Vector> witness) {
    if (!set.member) throw InputError("oracle set: membership predicate is required");
    if (!(set.ray_bound > 0.0)) throw InputError("oracle set: ray bound must be positive");
    return ConvexSet(dim, std::move(set), std::move(witness));
}

double ConvexSet::ray_bound() const {
    if (const auto* o = as_oracle()) return o->ray_bound;
    return kDefaultRayBound;
}

bool ConvexSet::contains(const Vector& e) const {
    require_dim(*this, e);
    if (const auto* p = as_polyhedron()) {
        const Vector lhs = p->a * e;
        for (int i = 0; i < lhs.size(); ++i) {
            if (!(lhs(i) < p->b(i))) return false;
        }
        return true;
    }
    if (const auto* ball = as_ball()) return (e - ball->center).norm() < ball->radius;
    return as_oracle()->member(e);
}

std::optional<double> ConvexSet::violation(const Vector& e) const {
    require_dim(*this, e);
    if (const auto* p = as_polyhedron()) {
        double v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < p->a.rows(); ++i) {
            v = std::max(v, (p->a.row(i).dot(e) - p->b(i)) / p->a.row(i).norm());
        }
        return v;
    }
    if (const auto* ball = as_ball()) return (e - ball->center).norm() - ball->radius;
    const auto* o = as_oracle();
    if (o->violation) return o->violation(e);
    return std::nullopt;
}

Matrix conic_hull_rows(const HPolyhedron& poly) {
    const int n = static_cast<int>(poly.a.cols());
    std::vector<Vector> lower;  // alpha > a.e / b  (b > 0), stored as a / b
    std::vector<Vector> upper;  // alpha < a.e / b  (b < 0), stored as a / b
    std::vector<Vector> rows;
    for (int i = 0; i < poly.a.rows(); ++i) {
        const Vector a = poly.a.row(i).transpose();
        const double b = poly.b(i);
        if (b > 0.0) {
            lower.push_back(a / b);
        } else if (b < 0.0) {
            upper.push_back(a / b);
        } else {
            rows.push_back(a);
        }
    }
    // 0 < alpha < a_k.e / b_k  gives  a_k . e < 0.
    for (const Vector& u : upper) rows.push_back(-u);
    for (const Vector& l : lower) {
        for (const Vector& u : upper) rows.push_back(l - u);
    }
    Matrix out(rows.size(), n);
    int k = 0;
    for (const Vector& r : rows) {
        const double norm = r.norm();
        // A zero row means A itself is empty; callers establish nonemptiness first.
        if (norm <= 1e-14) continue;
        out.row(k++) = (r / norm).transpose();
    }
    out.conservativeResize(k, n);
    return out;
}

bool conic_hull_membership(const ConvexSet& a, const Vector& e) {
    require_dim(a, e);
    if (const auto* ball = a.as_ball()) {
        // |e - alpha c|^2 < alpha^2 r^2 for some alpha > 0: a quadratic in alpha.
        const double ec = e.dot(ball->center);
        const double lead = ball->center.squaredNorm() - ball->radius * ball->radius;
        if (lead < 0.0) return true;
        if (!(ec > 0.0)) return false;
        // Points within rounding of the boundary ray count as outside: A is open.
        return lead == 0.0 || ec * ec > e.squaredNorm() * lead * (1.0 + 1e-12);
    }
    const auto* p = a.as_polyhedron();
    if (p == nullptr) return conic_hull_membership_search(a, e);
    // Feasible alpha form the open interval (lo, hi).
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    const Vector ae = p->a * e;
    for (int i = 0; i < ae.size(); ++i) {
        const double b = p->b(i);
        if (b > 0.0) {
            lo = std::max(lo, ae(i) / b);
        } else if (b < 0.0) {
            hi = std::min(hi, ae(i) / b);
        } else if (!(ae(i) < 0.0)) {
            return false;
        }
    }
    return lo < hi;
}

bool conic_hull_membership_search(const ConvexSet& a, const Vector& e) {
    require_dim(a, e);
    const double norm = e.norm();
    if (norm == 0.0) return false;
    const Vector u = e / norm;  // B is a cone
    if (!a.violation(u)) return conic_scan(a, u);

    double lo = 0.0;
    double hi = a.ray_bound();
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = scaled_violation(a, u, x1);
    double f2 = scaled_violation(a, u, x2);
    for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1e-300, x1); ++it) {
        if (f1 < 0.0 && a.contains(u / x1)) return true;
        if (f2 < 0.0 && a.contains(u / x2)) return true;
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = scaled_violation(a, u, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = scaled_violation(a, u, x2);
        }
    }
    const double best = f1 <= f2 ? x1 : x2;
    return std::min(f1, f2) < 0.0 && a.contains(u / best);
}

SymmetrizedBody::SymmetrizedBody(ConvexSet base, Vector anchor) : base_(std::move(base)), anchor_(std::move(anchor)) {
    if (anchor_.size() != base_.dim()) throw InputError("symmetrized body: anchor has wrong dimension");
}

bool SymmetrizedBody::contains(const Vector& e) const {
    if (e.size() != dim()) throw InputError("symmetrized body: point has wrong dimension");
    return conic_hull_membership(base_, anchor_ + e) && conic_hull_membership(base_, anchor_ - e);
}

SymmetrizedBody build_d(const ConvexSet& a, const Vector& x) {
    require_dim(a, x);
    require_finite(x, "anchor");
    if (!conic_hull_membership(a, x)) throw InputError("build_d: anchor is not in the conic hull of A");
    return SymmetrizedBody(a, x);
}

ChebyshevBall chebyshev_ball(const HPolyhedron& poly, std::optional<double> radius_cap) {
    const int n = static_cast<int>(poly.a.cols());
    const int m = static_cast<int>(poly.a.rows());
    // Variables (center, r).
    lp::Problem prob(n + 1);
    for (int i = 0; i < m; ++i) {
        Vector row(n + 1);
        row.head(n) = poly.a.row(i).transpose();
        row(n) = poly.a.row(i).norm();
        prob.add_le(row, poly.b(i));
    }
    if (radius_cap) prob.add_le(Vector::Unit(n + 1, n), *radius_cap);
    prob.cost(n) = -1.0;
    lp::Solution sol = lp::solve(prob);
    ChebyshevBall out;
    if (sol.status == lp::Status::Unbounded) {
        out.unbounded = true;
        return out;
    }
    if (sol.status != lp::Status::Optimal) throw SolverError("chebyshev: LP reported " + lp::to_string(sol.status));
    const double r = sol.x(n);
    out.radius = r;
    out.center = sol.x.head(n);
    if (r <= 0.0) return out;

    // Lexicographic tie-break over the optimal face; coordinates along which the face
    // is unbounded keep the previous optimal point.
    const double slack = 1e-9 * std::max(1.0, std::abs(r));
    prob.add_le(-Vector::Unit(n + 1, n), -(r - slack));
    for (int k = 0; k < n; ++k) {
        prob.cost = Vector::Unit(n + 1, k);
        lp::Solution step = lp::solve(prob);
        if (step.status != lp::Status::Optimal) continue;
        out.center = step.x.head(n);
        prob.add_le(Vector::Unit(n + 1, k), step.x(k) + 1e-9 * std::max(1.0, std::abs(step.x(k))));
    }
    return out;
}

bool is_empty(const ConvexSet& a) {
    const auto* p = a.as_polyhedron();
    if (p == nullptr) return false;
    if (p->a.rows() == 0) return false;
    const ChebyshevBall ball = chebyshev_ball(*p, 1.0);
    return ball.radius <= 1e-12;
}

Vector pick_interior_point(const ConvexSet& a) {
    if (const auto* ball = a.as_ball()) return ball->center;
    if (a.as_oracle() != nullptr) {
        if (!a.witness()) throw InputError("pick_interior_point: oracle set carries no witness point");
        if (!a.contains(*a.witness())) throw InputError("pick_interior_point: oracle witness is not in the set");
        return *a.witness();
    }
    const auto* p = a.as_polyhedron();
    if (is_empty(a)) throw EmptySetError("pick_interior_point: polyhedron has no interior points");
    const ChebyshevBall ball = chebyshev_ball(*p);
    if (ball.unbounded) {
        if (!a.witness()) throw InputError("pick_interior_point: unbounded polyhedron requires a witness point");
        if (!a.contains(*a.witness())) throw InputError("pick_interior_point: witness is not in the polyhedron");
        return *a.witness();
    }
    if (!a.contains(ball.center)) throw EmptySetError("pick_interior_point: Chebyshev center is not interior");
    return ball.center;
}

std::vector<Vector> sample_interior(const ConvexSet& a, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    Vector u;
    if (const auto* p = a.as_polyhedron(); p != nullptr && !a.witness()) {
        const ChebyshevBall ball = chebyshev_ball(*p, 1.0);
        if (ball.radius <= 1e-12) return {};
        u = ball.center;
    } else {
        u = pick_interior_point(a);
    }
    const double cap = a.ray_bound();
    std::vector<Vector> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vector d(a.dim());
        for (int i = 0; i < d.size(); ++i) d(i) = normal(rng);
        d.normalize();
        const double t_plus = chord_end(a, u, d, cap);
        const double t_minus = chord_end(a, u, Vector(-d), cap);
        const double t = -t_minus + unit(rng) * (t_plus + t_minus);
        const Vector next = u + t * d;
        if (a.contains(next)) u = next;
        out.push_back(u);
    }
    return out;
}

}  // namespace gaugesep
