#pragma once

#include "gaugesep/convex_set.hpp"
#include "gaugesep/extension.hpp"
#include "gaugesep/gauge.hpp"
#include "gaugesep/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gaugesep {

/// Sign tolerance for exact clearance tests (unit normal, unit-scale data).
inline constexpr double kTolClearance = 1e-9;
/// S must lie in the hyperplane to this residual.
inline constexpr double kTolSubspaceResidual = 1e-8;

struct SeparationOptions {
    std::optional<Vector> anchor;  ///< overrides pick_interior_point
    GammaRule rule = GammaRule::Upper;
    GaugeMode gauge_mode = GaugeMode::Auto;
    double tol_gauge = kTolGauge;
    ExtensionOptions extension;
    std::uint64_t seed = 0;
    int disjointness_samples = 1000;
    int clearance_samples = 10000;
    int cone_samples = 2000;
    int domination_trials = 2000;
};

/// Evidence that S lies in H and H misses A.
struct SeparationCertificate {
    double s_in_h_residual = 0.0;   ///< max |n . b| over the S basis
    double a_clearance = 0.0;       ///< signed: > 0 when A stays strictly on one side
    bool a_separated = false;       ///< n . e keeps one sign on A (touching the closure allowed, A is open)
    bool clearance_exact = false;   ///< LP or closed form rather than sampling
    int cone_samples = 0;           ///< conic-hull members probed for H n B
    int cone_violations = 0;
    std::optional<bool> remark2_status;  ///< dominated? == disjoint? for the returned g
    bool valid = false;
};

struct SeparationResult {
    Hyperplane hyperplane;
    Vector g;
    std::optional<Vector> anchor_x;
    std::optional<Seminorm> gauge_used;
    std::vector<ExtensionStep> interval_history;
    SeparationCertificate certificate;
    bool empty_set_branch = false;
};

/// Steps (2)-(5) of the pipeline: anchor, symmetrized body, its gauge, and the functional
/// f(z + t x) = t on L = span(S u {x}).
struct PipelineInstance {
    ConvexSet a;
    Subspace s;
    Vector anchor;
    Seminorm p;
    PartialFunctional f;
};

PipelineInstance prepare_pipeline(const ConvexSet& a, const Subspace& s, const SeparationOptions& options = {});

/// Best-effort check that A and S are disjoint: exact LP for polyhedra, exact distance for
/// balls, sampling of the S-ball of radius 10 for oracles.
bool intersects_subspace(const ConvexSet& a, const Subspace& s, std::uint64_t seed = 0, int samples = 1000);

/// Separating hyperplane through S missing A, via gauge and dominated extension.
SeparationResult separate(const ConvexSet& a, const Subspace& s, const SeparationOptions& options = {});

struct Clearance {
    double value = 0.0;
    bool separated = false;
    bool exact = false;
};

/// Signed clearance of A from Ker(n) for a unit normal n.
Clearance kernel_clearance(const ConvexSet& a, const Vector& normal, std::uint64_t seed = 0, int samples = 10000);

struct VerifyOptions {
    std::uint64_t seed = 0;
    int clearance_samples = 10000;
    int cone_samples = 2000;
};

SeparationCertificate verify_separation(const ConvexSet& a, const Subspace& s, const Hyperplane& h,
                                        const VerifyOptions& options = {});

struct Remark2Verdict {
    bool dominated = false;
    bool disjoint = false;
    double violation = 0.0;
    double clearance = 0.0;
};

/// For an extension g of the pipeline functional (g.x = 1, g = 0 on S), evaluates
/// |g| <= p and A n Ker(g) = {} independently.
Remark2Verdict remark2_equivalence_check(const PipelineInstance& instance, const Vector& g_candidate,
                                         std::uint64_t seed = 0, int trials = 2000);

/// Angles theta in [0, pi), on a grid of `grid` steps, whose line through the origin with
/// direction (cos theta, sin theta) misses the 2-D set A.
std::vector<double> brute_force_2d_normals(const ConvexSet& a, int grid);

/// Angle in [0, pi) of the line Ker(n) for a 2-D normal n.
double kernel_line_angle(const Vector& normal);

/// Extension of a dominated f obtained by separating A = { e : p(y - e) < 1 } from Ker(f).
Vector extend_via_separation(const PartialFunctional& f, const Seminorm& p, const SeparationOptions& options = {});

}  // namespace gaugesep
