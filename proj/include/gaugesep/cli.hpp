#pragma once

#include "gaugesep/convex_set.hpp"
#include "gaugesep/errors.hpp"
#include "gaugesep/extension.hpp"
#include "gaugesep/gauge.hpp"
#include "gaugesep/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gaugesep::cli {

inline constexpr const char* kToolVersion = "gaugesep 0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitMissingFile = 2,
    kExitSchema = 3,
    kExitPrecondition = 4,
    kExitSolver = 5,
};

/// Input file absent or unreadable.
class MissingFileError : public Error {
public:
    using Error::Error;
};

/// Problem file violates the v1 schema; the message names the line or the field.
class SchemaError : public Error {
public:
    using Error::Error;
};

struct ProblemOptions {
    GammaRule rule = GammaRule::Upper;
    std::uint64_t seed = 0;
    double tol_gauge = kTolGauge;
};

/// Validated contents of a version-1 problem file.
struct ProblemFile {
    int dimension = 0;
    ConvexSet a;
    Subspace s;
    std::optional<Vector> x;
    std::optional<Seminorm> seminorm;
    ProblemOptions options;
};

ProblemFile parse_problem(const std::string& path);
/// `origin` names the source in diagnostics.
ProblemFile parse_problem_text(const std::string& text, const std::string& origin = "<input>");

/// Names accepted by { "kind": "oracle", "name": ... }.
std::vector<std::string> fixture_names();
/// Oracle set registered under `name`, with its witness point.
std::optional<ConvexSet> fixture_set(const std::string& name);

/// Runs one subcommand; args exclude the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SvgScene {
    const ConvexSet* a = nullptr;
    const Subspace* s = nullptr;
    std::optional<Vector> anchor;
    std::optional<Vector> normal;
    std::vector<double> fan_angles;  ///< radians in [0, pi), lines through 0 missing A
};

/// Static SVG of a 2-D instance.
std::string render_svg(const SvgScene& scene);

}  // namespace gaugesep::cli
