#pragma once

#include "gaugesep/convex_set.hpp"
#include "gaugesep/geometry.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace gaugesep {

inline constexpr double kTolGauge = 1e-10;
inline constexpr double kRecessionCap = 1e12;

/// p(e) = max(0, max_i a_i.e / b_i), all b_i > 0.
struct PolyhedralGauge {
    Matrix a;
    Vector b;
};

/// Minkowski functional of a symmetrized body, evaluated by bisection on the ray.
struct OracleGauge {
    SymmetrizedBody body;
    double tol = kTolGauge;
    double recession_cap = kRecessionCap;
};

/// Minkowski functional of D = (B - x) n (x - B) for B the conic hull of an open ball,
/// a circular cone; evaluated in closed form from a quadratic along the ray.
struct BallConeGauge {
    Vector center;
    double radius = 0.0;
    Vector anchor;
};

/// p(e) = max_i |c_i . e|; test fixtures and file overrides.
struct ExplicitGauge {
    Matrix c;
};

/// Polyhedral description { e : a_i . e <= b_i } of a closed unit ball, used by the LP paths.
struct UnitBallRows {
    Matrix a;
    Vector b;
};

class Seminorm {
public:
    using Rep = std::variant<PolyhedralGauge, OracleGauge, ExplicitGauge, BallConeGauge>;

    static Seminorm polyhedral(Matrix a, Vector b);
    static Seminorm oracle(SymmetrizedBody body, double tol = kTolGauge, double recession_cap = kRecessionCap);
    static Seminorm explicit_rows(Matrix c);
    static Seminorm ball_cone(const OpenBall& ball, Vector anchor);

    int dim() const noexcept { return dim_; }
    const Rep& rep() const noexcept { return rep_; }
    bool is_oracle() const noexcept { return std::holds_alternative<OracleGauge>(rep_); }
    const char* kind() const noexcept;

    double operator()(const Vector& e) const;
    /// Membership in the open unit ball the gauge was built from.
    bool unit_ball_contains(const Vector& e) const;
    /// Row form for polyhedral and explicit gauges; nullopt for oracle gauges.
    std::optional<UnitBallRows> unit_ball_rows() const;

private:
    Seminorm(int dim, Rep rep) : dim_(dim), rep_(std::move(rep)) {}

    int dim_;
    Rep rep_;
};

/// Evaluates p at e; free-function spelling of Seminorm::operator().
inline double gauge(const Seminorm& p, const Vector& e) { return p(e); }

enum class GaugeMode { Auto, Oracle };

/// Minkowski functional of D = (B - x) n (x - B). Auto picks the closed polyhedral form
/// for polyhedra, the closed cone form for balls, and bisection otherwise.
Seminorm gauge_of_body(const ConvexSet& a, const Vector& anchor, GaugeMode mode = GaugeMode::Auto,
                       double tol = kTolGauge);

struct SeminormReport {
    double max_homogeneity_error = 0.0;
    double max_subadditivity_violation = 0.0;
    int unit_ball_agreements = 0;
    int unit_ball_checked = 0;
    int trials = 0;
};

/// Samples the seminorm axioms; deterministic given the seed.
SeminormReport check_seminorm_axioms(const Seminorm& p, std::uint64_t seed, int trials);

}  // namespace gaugesep
