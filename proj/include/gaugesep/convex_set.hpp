#pragma once

#include "gaugesep/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gaugesep {

/// Default search cap for rays and dilation factors.
inline constexpr double kDefaultRayBound = 1e6;

/// { e : a_i . e < b_i for every row i }, all inequalities strict.
struct HPolyhedron {
    Matrix a;
    Vector b;
};

/// { e : |e - center| < radius }.
struct OpenBall {
    Vector center;
    double radius = 1.0;
};

/// Open convex set known only through a membership predicate.
/// `violation` is optional: a convex function that is negative exactly on the set.
/// Predicates must be pure.
struct OracleSet {
    std::function<bool(const Vector&)> member;
    std::function<double(const Vector&)> violation;
    double ray_bound = kDefaultRayBound;
    std::string name;
};

/// Open convex subset of R^n in one of three representations.
class ConvexSet {
public:
    using Rep = std::variant<HPolyhedron, OpenBall, OracleSet>;

    static ConvexSet polyhedron(Matrix a, Vector b, std::optional<Vector> witness = std::nullopt);
    static ConvexSet ball(Vector center, double radius);
    static ConvexSet oracle(int dim, OracleSet set, std::optional<Vector> witness);

    int dim() const noexcept { return dim_; }
    const Rep& rep() const noexcept { return rep_; }
    const HPolyhedron* as_polyhedron() const { return std::get_if<HPolyhedron>(&rep_); }
    const OpenBall* as_ball() const { return std::get_if<OpenBall>(&rep_); }
    const OracleSet* as_oracle() const { return std::get_if<OracleSet>(&rep_); }
    const std::optional<Vector>& witness() const noexcept { return witness_; }
    double ray_bound() const;

    /// Strict membership; exact floating comparisons for polyhedra and balls.
    bool contains(const Vector& e) const;

    /// Signed violation, negative inside: normalized row slack for polyhedra, distance
    /// to the sphere for balls, the oracle's own function otherwise.
    std::optional<double> violation(const Vector& e) const;

private:
    ConvexSet(int dim, Rep rep, std::optional<Vector> witness);

    int dim_;
    Rep rep_;
    std::optional<Vector> witness_;
};

/// Homogeneous strict rows c_j (unit norm) with B = { e : c_j . e < 0 }, where B is the
/// union of the positive dilates of a nonempty polyhedron. Obtained by eliminating the
/// dilation factor from { (e, alpha) : a_i . e < alpha b_i, alpha > 0 }.
Matrix conic_hull_rows(const HPolyhedron& poly);

/// Whether e / alpha lies in A for some alpha > 0.
/// Polyhedra use the closed-form interval on alpha; other sets use the 1-D search.
bool conic_hull_membership(const ConvexSet& a, const Vector& e);

/// The 1-D search path for any representation: golden-section on the scaled violation
/// alpha * v(e / alpha) over (0, ray_bound], confirmed by membership.
bool conic_hull_membership_search(const ConvexSet& a, const Vector& e);

/// D = (B - x) n (x - B): the balanced open body around the origin built from B and an anchor x in B.
class SymmetrizedBody {
public:
    SymmetrizedBody(ConvexSet base, Vector anchor);

    const ConvexSet& base() const noexcept { return base_; }
    const Vector& anchor() const noexcept { return anchor_; }
    int dim() const noexcept { return base_.dim(); }
    bool contains(const Vector& e) const;

private:
    ConvexSet base_;
    Vector anchor_;
};

/// Checks x in B and returns D. Throws InputError when x is not in the conic hull.
SymmetrizedBody build_d(const ConvexSet& a, const Vector& x);

/// Largest inscribed ball of a polyhedron: maximizes the radius, ties broken by the
/// lexicographically least center. `radius_cap` bounds the LP when set.
struct ChebyshevBall {
    Vector center;
    double radius = 0.0;
    bool unbounded = false;
};
ChebyshevBall chebyshev_ball(const HPolyhedron& poly, std::optional<double> radius_cap = std::nullopt);

/// True when no point satisfies the strict inequalities.
bool is_empty(const ConvexSet& a);

/// A deterministic point of A: ball center, polyhedron Chebyshev center, oracle witness.
/// Unbounded polyhedra fall back to their witness. Throws EmptySetError or InputError.
Vector pick_interior_point(const ConvexSet& a);

/// Hit-and-run samples inside A started from pick_interior_point; chords are capped at ray_bound.
std::vector<Vector> sample_interior(const ConvexSet& a, int count, std::uint64_t seed);

}  // namespace gaugesep
