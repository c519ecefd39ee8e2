#pragma once

#include "gaugesep/gauge.hpp"
#include "gaugesep/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gaugesep {

/// Domination slack tolerated on basis vectors after each extension step.
inline constexpr double kTolStepDomination = 1e-7;
/// Certification gap of the derivative-free interval search.
inline constexpr double kTolDirectSearch = 1e-6;
inline constexpr double kIntermediateMargin = 1e-2;

enum class GammaRule { Upper, Lower, Midpoint };

GammaRule parse_gamma_rule(const std::string& name);
std::string to_string(GammaRule rule);

enum class IntervalMethod {
    Auto,           ///< LP for polyhedral and explicit gauges, direct search for oracle gauges
    LinearProgram,  ///< requires a row-form gauge
    DirectSearch,
};

struct ExtensionOptions {
    IntervalMethod method = IntervalMethod::Auto;
    std::uint64_t seed = 0;
    int restarts = 8;
    int iterations = 200;
};

/// Admissible values for the extension at a new direction z:
/// lo = sup_x (-g(x) - p(x + z)),  hi = inf_x (-g(x) + p(x + z)),  x ranging over G.
struct GammaInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double pick(GammaRule rule) const;
};

struct ExtensionStep {
    Vector z;
    double gamma = 0.0;
    GammaInterval interval;
};

/// A dominated functional on a subspace G plus the steps that produced it.
class ExtensionState {
public:
    ExtensionState(PartialFunctional functional, Seminorm seminorm);

    const Subspace& domain() const noexcept { return functional_.domain; }
    const PartialFunctional& functional() const noexcept { return functional_; }
    const Seminorm& seminorm() const noexcept { return seminorm_; }
    const std::vector<ExtensionStep>& history() const noexcept { return history_; }

    /// g as a coefficient vector, zero on the orthogonal complement of the domain.
    Vector coefficients() const { return functional_.representer(); }

    /// G + span{z} with g(z) = gamma. No domination check.
    ExtensionState with_direction(const Vector& z, double gamma, GammaInterval interval) const;

private:
    PartialFunctional functional_;
    Seminorm seminorm_;
    std::vector<ExtensionStep> history_;
};

GammaInterval extension_interval(const ExtensionState& state, const Vector& z, const ExtensionOptions& options = {});

/// One step of the induction: g(z) = gamma chosen from the admissible interval by `rule`.
ExtensionState extend_one(const ExtensionState& state, const Vector& z, GammaRule rule = GammaRule::Upper,
                          const ExtensionOptions& options = {});

/// Extends f to all of R^n along complement_basis(f.domain) in index order.
ExtensionState extend_full_state(const PartialFunctional& f, const Seminorm& p, GammaRule rule = GammaRule::Upper,
                                 const ExtensionOptions& options = {});

/// Coefficient vector of the full-space extension.
Vector extend_full(const PartialFunctional& f, const Seminorm& p, GammaRule rule = GammaRule::Upper,
                   const ExtensionOptions& options = {});

/// max over sampled unit directions e of |g.e| - p(e). Row-form gauges also get an exact LP
/// search for the worst direction in the unit box; other gauges get a local ascent on
/// g.e / p(e) from the best sample.
double domination_check(const Vector& g, const Seminorm& p, std::uint64_t seed, int trials);

}  // namespace gaugesep
