#include "gaugesep/gauge.hpp"

#include "gaugesep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gaugesep {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// 1 / sup{ s : s e in D }, bracketed by doubling from s = 1 and refined by bisection.
double bisect_gauge(const OracleGauge& g, const Vector& e) {
    if (e.isZero(0.0)) return 0.0;
    double inside = 0.0;
    double outside = 1.0;
    if (g.body.contains(e)) {
        inside = 1.0;
        outside = 2.0;
        while (g.body.contains(outside * e)) {
            inside = outside;
            if (outside >= g.recession_cap) return 0.0;
            outside *= 2.0;
        }
    } else {
        // Shrink until the ray point enters D; D is an open neighbourhood of 0.
        double s = 0.5;
        while (!g.body.contains(s * e)) {
            outside = s;
            s *= 0.5;
            if (s < 1e-300) throw SolverError("gauge: ray never enters the body");
        }
        inside = s;
    }
    for (int k = 0; k < 60 && outside - inside > g.tol * inside; ++k) {
        const double mid = 0.5 * (inside + outside);
        (g.body.contains(mid * e) ? inside : outside) = mid;
    }
    return 2.0 / (inside + outside);
}

// 1 / sup{ s >= 0 : x + s e in B }. With y = a c^ + w (w orthogonal to the axis), B is the
// second-order cone { a T > |w| }, T^2 = r^2 / (|c|^2 - r^2). Along the ray
// h(s) = T^2 a(s)^2 - |w(s)|^2 = qa s^2 + qb s + qc with qc > 0; the ray leaves B at the first
// positive root of h, and t = 1/s solves qc t^2 + qb t + qa = 0. The discriminant is formed
// from T^2 |a1 w0 - a0 w1|^2 - |w0 x w1|^2, which stays accurate for rays near the apex.
double ball_cone_ray(const BallConeGauge& g, const Vector& e) {
    const double c_norm = g.center.norm();
    const double k = c_norm * c_norm - g.radius * g.radius;
    const Vector axis = g.center / c_norm;
    const double a0 = g.anchor.dot(axis);
    const double a1 = e.dot(axis);
    if (k < 0.0) return 0.0;  // B is everything
    if (k == 0.0) return a1 < 0.0 ? -a1 / a0 : 0.0;
    const double t2 = g.radius * g.radius / k;
    const Vector w0 = g.anchor - a0 * axis;
    const Vector w1 = e - a1 * axis;
    const double qa = t2 * a1 * a1 - w1.squaredNorm();
    const double half_b = t2 * a0 * a1 - w0.dot(w1);
    const double qc = t2 * a0 * a0 - w0.squaredNorm();
    double wedge = 0.0;
    const double w0_norm = w0.norm();
    if (w0_norm > 0.0) {
        const Vector u = w0 / w0_norm;
        wedge = w0_norm * (w1 - w1.dot(u) * u).norm();
    }
    const double quarter_disc = t2 * (a1 * w0 - a0 * w1).squaredNorm() - wedge * wedge;
    // A clearly negative discriminant means the line never meets the boundary. Near zero it is
    // a double root (a ray through the apex, or grazing the surface), which is an exit since B
    // is open and the ray starts inside.
    const double disc_scale = t2 * (a1 * w0).squaredNorm() + t2 * (a0 * w1).squaredNorm() + w0.squaredNorm() * w1.squaredNorm();
    if (quarter_disc < -1e-12 * disc_scale) return 0.0;
    const double root = std::sqrt(std::max(quarter_disc, 0.0));
    // Larger root of qc t^2 + 2 half_b t + qa, in the cancellation-free form.
    const double t = half_b <= 0.0 ? (-half_b + root) / qc : qa / (-half_b - root);
    return std::max(0.0, t);
}

}  // namespace

Seminorm Seminorm::polyhedral(Matrix a, Vector b) {
    if (a.rows() != b.size()) throw InputError("polyhedral gauge: row count differs from right-hand side length");
    if (a.cols() <= 0) throw InputError("polyhedral gauge: rows must have positive length");
    if (!a.allFinite() || !b.allFinite()) throw InputError("polyhedral gauge: non-finite data");
    for (int i = 0; i < b.size(); ++i) {
        if (!(b(i) > 0.0)) throw InputError("polyhedral gauge: origin is not interior (b_" + std::to_string(i) + " <= 0)");
    }
    const int dim = static_cast<int>(a.cols());
    return Seminorm(dim, PolyhedralGauge{std::move(a), std::move(b)});
}

Seminorm Seminorm::oracle(SymmetrizedBody body, double tol, double recession_cap) {
    if (!(tol > 0.0) || !(recession_cap > 1.0)) throw InputError("oracle gauge: invalid tolerance or cap");
    const int dim = body.dim();
    return Seminorm(dim, OracleGauge{std::move(body), tol, recession_cap});
}

Seminorm Seminorm::explicit_rows(Matrix c) {
    if (c.cols() <= 0) throw InputError("explicit gauge: rows must have positive length");
    if (!c.allFinite()) throw InputError("explicit gauge: non-finite data");
    const int dim = static_cast<int>(c.cols());
    return Seminorm(dim, ExplicitGauge{std::move(c)});
}

Seminorm Seminorm::ball_cone(const OpenBall& ball, Vector anchor) {
    if (anchor.size() != ball.center.size()) throw InputError("ball cone gauge: anchor has wrong dimension");
    const OpenBall copy = ball;
    if (!conic_hull_membership(ConvexSet::ball(copy.center, copy.radius), anchor)) {
        throw InputError("ball cone gauge: anchor is not in the conic hull of the ball");
    }
    const int dim = static_cast<int>(anchor.size());
    return Seminorm(dim, BallConeGauge{ball.center, ball.radius, std::move(anchor)});
}

const char* Seminorm::kind() const noexcept {
    return std::visit(overloaded{[](const PolyhedralGauge&) { return "polyhedral"; },
                                 [](const OracleGauge&) { return "oracle"; },
                                 [](const ExplicitGauge&) { return "explicit"; },
                                 [](const BallConeGauge&) { return "ball"; }},
                      rep_);
}

double Seminorm::operator()(const Vector& e) const {
    if (e.size() != dim_) throw InputError("gauge: point has wrong dimension");
    return std::visit(overloaded{[&](const PolyhedralGauge& g) {
                                     double v = 0.0;
                                     for (int i = 0; i < g.a.rows(); ++i) v = std::max(v, g.a.row(i).dot(e) / g.b(i));
                                     return v;
                                 },
                                 [&](const OracleGauge& g) { return bisect_gauge(g, e); },
                                 [&](const ExplicitGauge& g) {
                                     return g.c.rows() == 0 ? 0.0 : (g.c * e).cwiseAbs().maxCoeff();
                                 },
                                 [&](const BallConeGauge& g) {
                                     return std::max(ball_cone_ray(g, e), ball_cone_ray(g, -e));
                                 }},
                      rep_);
}

bool Seminorm::unit_ball_contains(const Vector& e) const {
    if (e.size() != dim_) throw InputError("gauge: point has wrong dimension");
    return std::visit(overloaded{[&](const PolyhedralGauge& g) {
                                     const Vector lhs = g.a * e;
                                     for (int i = 0; i < lhs.size(); ++i) {
                                         if (!(lhs(i) < g.b(i))) return false;
                                     }
                                     return true;
                                 },
                                 [&](const OracleGauge& g) { return g.body.contains(e); },
                                 [&](const ExplicitGauge& g) {
                                     return g.c.rows() == 0 || (g.c * e).cwiseAbs().maxCoeff() < 1.0;
                                 },
                                 [&](const BallConeGauge& g) {
                                     const ConvexSet ball = ConvexSet::ball(g.center, g.radius);
                                     return conic_hull_membership(ball, g.anchor + e) &&
                                            conic_hull_membership(ball, g.anchor - e);
                                 }},
                      rep_);
}

std::optional<UnitBallRows> Seminorm::unit_ball_rows() const {
    if (const auto* g = std::get_if<PolyhedralGauge>(&rep_)) return UnitBallRows{g->a, g->b};
    if (const auto* g = std::get_if<ExplicitGauge>(&rep_)) {
        Matrix a(2 * g->c.rows(), dim_);
        a << g->c, -g->c;
        return UnitBallRows{std::move(a), Vector::Ones(2 * g->c.rows())};
    }
    return std::nullopt;
}

Seminorm gauge_of_body(const ConvexSet& a, const Vector& anchor, GaugeMode mode, double tol) {
    SymmetrizedBody body = build_d(a, anchor);
    if (mode == GaugeMode::Oracle) return Seminorm::oracle(std::move(body), tol);
    if (const auto* ball = a.as_ball()) return Seminorm::ball_cone(*ball, anchor);
    const auto* poly = a.as_polyhedron();
    if (poly == nullptr) return Seminorm::oracle(std::move(body), tol);

    // B = { c_j . e < 0 }, so D = { |c_j . e| < -c_j . x }; rows are scaled to unit right-hand side.
    const Matrix cone = conic_hull_rows(*poly);
    const Vector depth = -(cone * anchor);
    Matrix rows(2 * cone.rows(), a.dim());
    for (Eigen::Index j = 0; j < cone.rows(); ++j) {
        rows.row(j) = cone.row(j) / depth(j);
        rows.row(cone.rows() + j) = -rows.row(j);
    }
    return Seminorm::polyhedral(std::move(rows), Vector::Ones(2 * cone.rows()));
}

SeminormReport check_seminorm_axioms(const Seminorm& p, std::uint64_t seed, int trials) {
    if (trials < 1) throw InputError("check_seminorm_axioms: trials must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> radius(0.0, 2.0);
    std::uniform_real_distribution<double> scale(-5.0, 5.0);
    const int n = p.dim();

    // Points spread so that p(e) ranges over (0, 2), straddling the unit sphere.
    auto draw = [&] {
        Vector d(n);
        for (int i = 0; i < n; ++i) d(i) = normal(rng);
        const double pd = p(d);
        return pd > 0.0 ? Vector(d * (radius(rng) / pd)) : Vector(d * 5.0 * radius(rng));
    };

    SeminormReport report;
    report.trials = trials;
    if (p(Vector::Zero(n)) != 0.0) report.max_homogeneity_error = std::abs(p(Vector::Zero(n)));
    for (int k = 0; k < trials; ++k) {
        const Vector u = draw();
        const Vector v = draw();
        const double t = scale(rng);
        const double pu = p(u);
        const double pv = p(v);

        const double target = std::abs(t) * pu;
        const double hom = std::abs(p(t * u) - target) / std::max(1.0, target);
        report.max_homogeneity_error = std::max(report.max_homogeneity_error, hom);
        report.max_subadditivity_violation = std::max(report.max_subadditivity_violation, p(u + v) - pu - pv);

        if (std::abs(pu - 1.0) > 1e-7) {
            ++report.unit_ball_checked;
            if ((pu < 1.0) == p.unit_ball_contains(u)) ++report.unit_ball_agreements;
        }
    }
    return report;
}

}  // namespace gaugesep
