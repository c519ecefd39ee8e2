#include "gaugesep/cli.hpp"
#include "gaugesep/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace gaugesep::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Flags {
    std::string input;
    std::string point;
    std::string gamma_rule;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string output;
    std::string svg;
    std::string goldens;
};

/// Failure carrying its exit code and a machine-readable reason.
struct CommandError {
    int code;
    std::string reason;
    std::string message;
};

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json certificate_json(const SeparationCertificate& c) {
    json out;
    out["s_in_h_residual"] = c.s_in_h_residual;
    out["a_clearance"] = c.a_clearance;
    out["a_separated"] = c.a_separated;
    out["clearance_exact"] = c.clearance_exact;
    out["cone_samples"] = c.cone_samples;
    out["cone_violations"] = c.cone_violations;
    out["remark2_status"] = c.remark2_status ? json(*c.remark2_status) : json(nullptr);
    out["valid"] = c.valid;
    return out;
}

json history_json(const std::vector<ExtensionStep>& steps) {
    json out = json::array();
    for (const ExtensionStep& s : steps) {
        out.push_back({{"z", to_json(s.z)}, {"lo", s.interval.lo}, {"hi", s.interval.hi}, {"gamma", s.gamma}});
    }
    return out;
}

Vector parse_csv(const std::string& text, int dim, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CommandError{kExitSchema, "bad_flag", std::string(flag) + ": '" + item + "' is not a number"};
        }
    }
    if (static_cast<int>(values.size()) != dim) {
        throw CommandError{kExitSchema, "bad_flag",
                           std::string(flag) + ": expected " + std::to_string(dim) + " comma-separated numbers"};
    }
    Vector out(dim);
    for (int i = 0; i < dim; ++i) out(i) = values[i];
    if (!out.allFinite()) throw CommandError{kExitSchema, "bad_flag", std::string(flag) + ": non-finite value"};
    return out;
}

class Session {
public:
    Session(std::string command, const Flags& flags) : command_(std::move(command)), flags_(flags) {}

    ProblemFile load() const {
        if (flags_.input.empty()) throw CommandError{kExitSchema, "usage", command_ + ": --input is required"};
        ProblemFile pf = parse_problem(flags_.input);
        if (!flags_.gamma_rule.empty()) pf.options.rule = parse_gamma_rule(flags_.gamma_rule);
        if (flags_.seed) pf.options.seed = *flags_.seed;
        if (flags_.tol) pf.options.tol_gauge = *flags_.tol;
        return pf;
    }

    static SeparationOptions separation_options(const ProblemFile& pf) {
        SeparationOptions o;
        o.anchor = pf.x;
        o.rule = pf.options.rule;
        o.tol_gauge = pf.options.tol_gauge;
        o.seed = pf.options.seed;
        o.extension.seed = pf.options.seed;
        return o;
    }

    json base_document() const {
        json doc;
        doc["version"] = 1;
        doc["tool"] = kToolVersion;
        doc["command"] = command_;
        doc["status"] = "ok";
        doc["reason"] = nullptr;
        return doc;
    }

    void emit(json doc, std::ostream& out) const {
        doc["timings"] = {{"total_ms", std::chrono::duration<double, std::milli>(Clock::now() - start_).count()}};
        const std::string text = doc.dump(2) + "\n";
        if (flags_.output.empty()) {
            out << text;
            return;
        }
        std::ofstream file(flags_.output);
        if (!file) throw CommandError{kExitMissingFile, "output_unwritable", "cannot write " + flags_.output};
        file << text;
    }

    void write_svg(const std::string& svg, std::ostream& out) const {
        if (flags_.svg.empty()) {
            out << svg;
            return;
        }
        std::ofstream file(flags_.svg);
        if (!file) throw CommandError{kExitMissingFile, "output_unwritable", "cannot write " + flags_.svg};
        file << svg;
    }

    const Flags& flags() const { return flags_; }
    const std::string& command() const { return command_; }

private:
    std::string command_;
    const Flags& flags_;
    Clock::time_point start_ = Clock::now();
};

Seminorm seminorm_for(const ProblemFile& pf, const Vector& anchor) {
    if (pf.seminorm) return *pf.seminorm;
    return gauge_of_body(pf.a, anchor, GaugeMode::Auto, pf.options.tol_gauge);
}

Vector anchor_for(const ProblemFile& pf) { return pf.x ? *pf.x : pick_interior_point(pf.a); }

int cmd_gauge(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    if (session.flags().point.empty()) throw CommandError{kExitSchema, "usage", "gauge: --point is required"};
    const Vector e = parse_csv(session.flags().point, pf.dimension, "--point");
    const Vector x = anchor_for(pf);
    const Seminorm p = seminorm_for(pf, x);
    json doc = session.base_document();
    doc["gauge"] = {{"kind", p.kind()}, {"anchor", to_json(x)}, {"point", to_json(e)}, {"value", p(e)}};
    session.emit(doc, out);
    return kExitOk;
}

int cmd_conic(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    if (session.flags().point.empty()) throw CommandError{kExitSchema, "usage", "conic: --point is required"};
    const Vector e = parse_csv(session.flags().point, pf.dimension, "--point");
    json doc = session.base_document();
    doc["conic"] = {{"point", to_json(e)}, {"member", conic_hull_membership(pf.a, e)}};
    session.emit(doc, out);
    return kExitOk;
}

int cmd_extend(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    const SeparationOptions opts = Session::separation_options(pf);
    const PipelineInstance inst = prepare_pipeline(pf.a, pf.s, opts);
    const Seminorm p = pf.seminorm ? *pf.seminorm : inst.p;
    const ExtensionState state = extend_full_state(inst.f, p, opts.rule, opts.extension);
    const Vector g = state.coefficients();

    json doc = session.base_document();
    doc["anchor"] = to_json(inst.anchor);
    doc["gauge_kind"] = p.kind();
    doc["gamma_rule"] = to_string(opts.rule);
    doc["g"] = to_json(g);
    doc["gamma_history"] = history_json(state.history());
    doc["domination_violation"] = domination_check(g, p, opts.seed, 2000);
    session.emit(doc, out);
    return kExitOk;
}

json separation_document(const Session& session, const SeparationResult& r, GammaRule rule) {
    json doc = session.base_document();
    doc["hyperplane"] = {{"normal", to_json(r.hyperplane.normal)}};
    doc["g"] = to_json(r.g);
    doc["anchor"] = r.anchor_x ? to_json(*r.anchor_x) : json(nullptr);
    doc["gauge_kind"] = r.gauge_used ? json(r.gauge_used->kind()) : json(nullptr);
    doc["gamma_rule"] = to_string(rule);
    doc["gamma_history"] = history_json(r.interval_history);
    doc["empty_set_branch"] = r.empty_set_branch;
    doc["certificate"] = certificate_json(r.certificate);
    if (!r.certificate.valid) {
        doc["status"] = "failed";
        doc["reason"] = "certificate_rejected";
    }
    return doc;
}

int cmd_separate(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    const SeparationOptions opts = Session::separation_options(pf);
    const SeparationResult r = separate(pf.a, pf.s, opts);
    if (!session.flags().svg.empty()) {
        if (pf.dimension != 2) throw CommandError{kExitPrecondition, "not_two_dimensional", "--svg needs a 2-D instance"};
        session.write_svg(render_svg(SvgScene{&pf.a, &pf.s, r.anchor_x, r.hyperplane.normal,
                                              brute_force_2d_normals(pf.a, 360)}),
                          out);
    }
    session.emit(separation_document(session, r, opts.rule), out);
    return r.certificate.valid ? kExitOk : kExitSolver;
}

int cmd_roundtrip(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    const SeparationOptions opts = Session::separation_options(pf);
    const PipelineInstance inst = prepare_pipeline(pf.a, pf.s, opts);
    const Seminorm p = pf.seminorm ? *pf.seminorm : inst.p;
    const Vector by_extension = extend_full(inst.f, p, opts.rule, opts.extension);
    const Vector by_separation = extend_via_separation(inst.f, p, opts);

    double agreement = 0.0;
    for (int i = 0; i < inst.f.domain.dim(); ++i) {
        agreement = std::max(agreement, std::abs(by_separation.dot(inst.f.domain.basis_vector(i)) - inst.f.values(i)));
    }
    const double violation = domination_check(by_separation, p, opts.seed, 2000);
    const bool ok = agreement < 1e-8 && violation <= 1e-6;

    json doc = session.base_document();
    doc["g_extension"] = to_json(by_extension);
    doc["g_separation"] = to_json(by_separation);
    doc["agreement_on_domain"] = agreement;
    doc["domination_violation"] = violation;
    if (!ok) {
        doc["status"] = "failed";
        doc["reason"] = "roundtrip_mismatch";
    }
    session.emit(doc, out);
    return ok ? kExitOk : kExitSolver;
}

int cmd_verify(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    const SeparationOptions opts = Session::separation_options(pf);
    Vector normal;
    if (session.flags().point.empty()) {
        normal = separate(pf.a, pf.s, opts).hyperplane.normal;
    } else {
        normal = parse_csv(session.flags().point, pf.dimension, "--point");
        if (!(normal.norm() > 0.0)) throw CommandError{kExitPrecondition, "zero_normal", "verify: zero normal"};
        normal.normalize();
    }
    const SeparationCertificate c =
        verify_separation(pf.a, pf.s, Hyperplane{normal}, VerifyOptions{opts.seed, opts.clearance_samples, opts.cone_samples});
    json doc = session.base_document();
    doc["hyperplane"] = {{"normal", to_json(normal)}};
    doc["certificate"] = certificate_json(c);
    if (!c.valid) {
        doc["status"] = "failed";
        doc["reason"] = "certificate_rejected";
    }
    session.emit(doc, out);
    return c.valid ? kExitOk : kExitPrecondition;
}

int cmd_render(const Session& session, std::ostream& out) {
    const ProblemFile pf = session.load();
    if (pf.dimension != 2) throw CommandError{kExitPrecondition, "not_two_dimensional", "render: 2-D instances only"};
    const SeparationOptions opts = Session::separation_options(pf);
    const SeparationResult r = separate(pf.a, pf.s, opts);
    session.write_svg(
        render_svg(SvgScene{&pf.a, &pf.s, r.anchor_x, r.hyperplane.normal, brute_force_2d_normals(pf.a, 360)}), out);
    if (!session.flags().svg.empty()) session.emit(separation_document(session, r, opts.rule), out);
    return kExitOk;
}

// Bundled examples and their pinned results.
struct Golden {
    std::string name;
    std::string problem;
    json expected;
    double tol;
};

std::vector<Golden> default_goldens() {
    const double h = 0.70710678118654757;
    return {
        {"example1",
         R"({"version": 1, "dimension": 2,
             "A": {"kind": "ball", "center": [2, 0], "radius": 1.4142135623730951},
             "S": {"basis": []}, "x": [1, 0]})",
         {{"g", {1.0, 1.0}}, {"normal", {h, h}}, {"valid", true}},
         1e-6},
        {"example2",
         R"({"version": 1, "dimension": 3,
             "A": {"kind": "hpoly", "rows": [{"a": [-1, 0, 0], "b": 0, "strict": true}], "witness": [1, -3, 0]},
             "S": {"basis": [[0, 0, 1]]}, "x": [1, -3, 0]})",
         {{"g", {1.0, 0.0, 0.0}}, {"normal", {1.0, 0.0, 0.0}}, {"valid", true}},
         1e-8},
        {"example3_quotient",
         R"({"version": 1, "dimension": 2,
             "A": {"kind": "hpoly", "rows": [{"a": [0, 1], "b": 0, "strict": true}], "witness": [-2, -1]},
             "S": {"basis": []}, "x": [-2, -1]})",
         {{"g", {0.0, -1.0}}, {"normal", {0.0, -1.0}}, {"valid", true}},
         1e-8},
    };
}

/// First field where `got` leaves `expected`, as "field: expected X got Y".
std::optional<std::string> first_divergence(const json& expected, const json& got, double tol) {
    for (const auto& [field, want] : expected.items()) {
        if (!got.contains(field)) return field + ": missing";
        const json& have = got[field];
        if (want.is_boolean()) {
            if (have != want) return field + ": expected " + want.dump() + " got " + have.dump();
            continue;
        }
        if (have.size() != want.size()) {
            return field + ": expected " + std::to_string(want.size()) + " entries got " + std::to_string(have.size());
        }
        for (std::size_t i = 0; i < want.size(); ++i) {
            const double w = want[i].get<double>();
            const double g = have[i].get<double>();
            if (!(std::abs(w - g) <= tol)) {
                return field + "[" + std::to_string(i) + "]: expected " + json(w).dump() + " got " + json(g).dump();
            }
        }
    }
    return std::nullopt;
}

int cmd_repro(const Session& session, std::ostream& out) {
    std::vector<Golden> goldens = default_goldens();
    if (!session.flags().goldens.empty()) {
        // Overrides for pinned values, keyed by example name.
        std::ifstream in(session.flags().goldens);
        if (!in) throw MissingFileError("cannot open " + session.flags().goldens);
        json overrides;
        try {
            overrides = json::parse(in);
        } catch (const json::parse_error&) {
            throw SchemaError(session.flags().goldens + ": malformed JSON");
        }
        for (Golden& g : goldens) {
            if (overrides.contains(g.name)) g.expected.update(overrides[g.name]);
        }
    }

    bool all = true;
    for (const Golden& g : goldens) {
        const ProblemFile pf = parse_problem_text(g.problem, g.name);
        std::optional<std::string> diff;
        try {
            const SeparationResult r = separate(pf.a, pf.s, Session::separation_options(pf));
            const json got = {{"g", to_json(r.g)},
                              {"normal", to_json(r.hyperplane.normal)},
                              {"valid", r.certificate.valid}};
            diff = first_divergence(g.expected, got, g.tol);
        } catch (const Error& e) {
            diff = std::string("pipeline: ") + e.what();
        }
        if (diff) {
            all = false;
            out << "FAIL " << g.name << ": " << *diff << "\n";
        } else {
            out << "PASS " << g.name << "\n";
        }
    }
    return all ? kExitOk : kExitSolver;
}

int failure(const Session& session, int code, const std::string& reason, const std::string& message,
            std::ostream& out, std::ostream& err) {
    err << "gaugesep " << session.command() << ": " << message << "\n";
    json doc = session.base_document();
    doc["status"] = "failed";
    doc["reason"] = reason;
    doc["message"] = message;
    doc["exit_code"] = code;
    doc["certificate"] = certificate_json(SeparationCertificate{});
    try {
        session.emit(doc, out);
    } catch (const CommandError&) {
        // The output file itself is the problem; stderr already has the message.
    }
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Separating hyperplanes and dominated extensions via gauges", "gaugesep"};
    app.require_subcommand(1);
    Flags flags;

    using Handler = int (*)(const Session&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"gauge", "Minkowski functional of D at --point", cmd_gauge},
        {"conic", "membership of --point in the conic hull of A", cmd_conic},
        {"extend", "dominated extension of the pipeline functional", cmd_extend},
        {"separate", "separating hyperplane with certificate", cmd_separate},
        {"roundtrip", "extension recovered through separation", cmd_roundtrip},
        {"verify", "certificate for the normal in --point, or for the computed one", cmd_verify},
        {"repro", "bundled examples against pinned results", cmd_repro},
        {"render", "SVG of a 2-D instance", cmd_render},
    };
    std::string chosen;
    Handler handler = nullptr;
    for (const auto& [name, help, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        if (name == "repro") {
            sub->add_option("--goldens", flags.goldens, "JSON overrides for pinned values");
        } else {
            sub->add_option("--input", flags.input, "problem file (JSON, version 1)");
            sub->add_option("--point", flags.point, "comma-separated coordinates");
            sub->add_option("--gamma-rule", flags.gamma_rule, "upper, lower or midpoint")
                ->check(CLI::IsMember({"upper", "lower", "midpoint"}));
            sub->add_option("--seed", flags.seed, "random seed");
            sub->add_option("--tol", flags.tol, "gauge bisection tolerance")->check(CLI::PositiveNumber);
            sub->add_option("--svg", flags.svg, "SVG output file");
        }
        sub->add_option("--output", flags.output, "write the result document here instead of stdout");
        sub->callback([&chosen, &handler, name = name, fn = fn] {
            chosen = name;
            handler = fn;
        });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gaugesep: " << e.what() << "\n" << "run 'gaugesep --help' for usage\n";
        return kExitSchema;
    }

    const Session session(chosen, flags);
    try {
        return handler(session, out);
    } catch (const CommandError& e) {
        return failure(session, e.code, e.reason, e.message, out, err);
    } catch (const MissingFileError& e) {
        return failure(session, kExitMissingFile, "missing_file", e.what(), out, err);
    } catch (const SchemaError& e) {
        return failure(session, kExitSchema, "schema", e.what(), out, err);
    } catch (const InputError& e) {
        return failure(session, kExitPrecondition, "precondition", e.what(), out, err);
    } catch (const DegenerateError& e) {
        return failure(session, kExitPrecondition, "degenerate", e.what(), out, err);
    } catch (const EmptySetError& e) {
        return failure(session, kExitPrecondition, "empty_set", e.what(), out, err);
    } catch (const SolverError& e) {
        return failure(session, kExitSolver, "solver", e.what(), out, err);
    }
}

}  // namespace gaugesep::cli
