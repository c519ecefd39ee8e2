#include "gaugesep/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gaugesep::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SchemaError("field " + (where.empty() ? std::string("/") : where) + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, const std::set<std::string>& keys) {
    for (const auto& [key, value] : obj.items()) {
        if (!keys.count(key)) fail(where + "/" + key, "unknown key");
    }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where + "/" + key, "missing");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "not finite");
    return d;
}

Vector vector_of(const json& v, const std::string& where, int dim) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    if (static_cast<int>(v.size()) != dim) {
        fail(where, "length " + std::to_string(v.size()) + " does not match dimension " + std::to_string(dim));
    }
    Vector out(dim);
    for (int i = 0; i < dim; ++i) out(i) = number(v[i], where + "/" + std::to_string(i));
    return out;
}

const json& object_at(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "expected an object");
    return v;
}

struct Fixture {
    int dim;
    Vector witness;
    std::function<double(const Vector&)> violation;
};

const std::map<std::string, Fixture>& registry() {
    static const std::map<std::string, Fixture> fixtures = [] {
        std::map<std::string, Fixture> m;
        const double r = std::sqrt(2.0);
        m.emplace("disk_example1", Fixture{2, Vector{{2.0, 0.0}}, [r](const Vector& e) {
                                                   return std::hypot(e(0) - 2.0, e(1)) - r;
                                               }});
        m.emplace("lower_half_plane", Fixture{2, Vector{{-2.0, -1.0}}, [](const Vector& e) { return e(1); }});
        m.emplace("superellipse", Fixture{2, Vector{{3.0, 1.0}}, [](const Vector& e) {
                                                  const double u = std::pow(e(0) - 3.0, 4);
                                                  const double v = std::pow(e(1) - 1.0, 4);
                                                  return std::pow(u + v, 0.25) - 1.0;
                                              }});
        m.emplace("ball3", Fixture{3, Vector{{3.0, 0.0, 0.0}}, [](const Vector& e) {
                                               return (e - Vector{{3.0, 0.0, 0.0}}).norm() - 1.0;
                                           }});
        return m;
    }();
    return fixtures;
}

ConvexSet parse_set(const json& v, int dim) {
    const std::string where = "/A";
    object_at(v, where);
    const json& kind = require(v, where, "kind");
    if (!kind.is_string()) fail(where + "/kind", "expected a string");
    const std::string k = kind.get<std::string>();

    if (k == "hpoly") {
        allow_keys(v, where, {"kind", "rows", "witness"});
        const json& rows = require(v, where, "rows");
        if (!rows.is_array() || rows.empty()) fail(where + "/rows", "expected a non-empty array");
        Matrix a(rows.size(), dim);
        Vector b(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string at = where + "/rows/" + std::to_string(i);
            const json& row = object_at(rows[i], at);
            allow_keys(row, at, {"a", "b", "strict"});
            a.row(i) = vector_of(require(row, at, "a"), at + "/a", dim).transpose();
            b(i) = number(require(row, at, "b"), at + "/b");
            const json& strict = require(row, at, "strict");
            if (!strict.is_boolean()) fail(at + "/strict", "expected a boolean");
            if (!strict.get<bool>()) fail(at + "/strict", "must be true in version 1");
            if (!(a.row(i).norm() > 0.0)) fail(at + "/a", "zero row");
        }
        std::optional<Vector> witness;
        if (v.contains("witness")) witness = vector_of(v["witness"], where + "/witness", dim);
        return ConvexSet::polyhedron(std::move(a), std::move(b), std::move(witness));
    }
    if (k == "ball") {
        allow_keys(v, where, {"kind", "center", "radius"});
        Vector c = vector_of(require(v, where, "center"), where + "/center", dim);
        const double r = number(require(v, where, "radius"), where + "/radius");
        if (!(r > 0.0)) fail(where + "/radius", "must be positive");
        return ConvexSet::ball(std::move(c), r);
    }
    if (k == "oracle") {
        allow_keys(v, where, {"kind", "name"});
        const json& name = require(v, where, "name");
        if (!name.is_string()) fail(where + "/name", "expected a string");
        std::optional<ConvexSet> set = fixture_set(name.get<std::string>());
        if (!set) fail(where + "/name", "no fixture named '" + name.get<std::string>() + "'");
        if (set->dim() != dim) {
            fail(where + "/name", "fixture lives in R^" + std::to_string(set->dim()) + ", dimension is " +
                                      std::to_string(dim));
        }
        return *set;
    }
    fail(where + "/kind", "expected one of hpoly, ball, oracle");
}

Subspace parse_subspace(const json& v, int dim) {
    const std::string where = "/S";
    object_at(v, where);
    allow_keys(v, where, {"basis"});
    const json& basis = require(v, where, "basis");
    if (!basis.is_array()) fail(where + "/basis", "expected an array of vectors");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        rows.push_back(vector_of(basis[i], where + "/basis/" + std::to_string(i), dim));
    }
    Subspace s = span_basis(rows, dim);
    if (s.dim() != static_cast<int>(rows.size())) fail(where + "/basis", "rows are linearly dependent");
    return s;
}

Seminorm parse_seminorm(const json& v, int dim) {
    const std::string where = "/seminorm";
    object_at(v, where);
    const json& kind = require(v, where, "kind");
    if (!kind.is_string()) fail(where + "/kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "explicit") {
        // p(e) = max_i |c_i . e|
        allow_keys(v, where, {"kind", "rows"});
        const json& rows = require(v, where, "rows");
        if (!rows.is_array() || rows.empty()) fail(where + "/rows", "expected a non-empty array");
        Matrix c(rows.size(), dim);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            c.row(i) = vector_of(rows[i], where + "/rows/" + std::to_string(i), dim).transpose();
        }
        return Seminorm::explicit_rows(std::move(c));
    }
    if (k == "polyhedral") {
        // p(e) = max(0, max_i a_i . e / b_i)
        allow_keys(v, where, {"kind", "rows"});
        const json& rows = require(v, where, "rows");
        if (!rows.is_array() || rows.empty()) fail(where + "/rows", "expected a non-empty array");
        Matrix a(rows.size(), dim);
        Vector b(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string at = where + "/rows/" + std::to_string(i);
            object_at(rows[i], at);
            allow_keys(rows[i], at, {"a", "b"});
            a.row(i) = vector_of(require(rows[i], at, "a"), at + "/a", dim).transpose();
            b(i) = number(require(rows[i], at, "b"), at + "/b");
            if (!(b(i) > 0.0)) fail(at + "/b", "must be positive");
        }
        return Seminorm::polyhedral(std::move(a), std::move(b));
    }
    fail(where + "/kind", "expected one of explicit, polyhedral");
}

ProblemOptions parse_options(const json& v) {
    const std::string where = "/options";
    object_at(v, where);
    allow_keys(v, where, {"gamma_rule", "seed", "tol_gauge"});
    ProblemOptions out;
    if (v.contains("gamma_rule")) {
        const json& r = v["gamma_rule"];
        if (!r.is_string()) fail(where + "/gamma_rule", "expected a string");
        try {
            out.rule = parse_gamma_rule(r.get<std::string>());
        } catch (const InputError&) {
            fail(where + "/gamma_rule", "expected one of upper, lower, midpoint");
        }
    }
    if (v.contains("seed")) {
        const json& s = v["seed"];
        if (!s.is_number_unsigned()) fail(where + "/seed", "expected a non-negative integer");
        out.seed = s.get<std::uint64_t>();
    }
    if (v.contains("tol_gauge")) {
        out.tol_gauge = number(v["tol_gauge"], where + "/tol_gauge");
        if (!(out.tol_gauge > 0.0)) fail(where + "/tol_gauge", "must be positive");
    }
    return out;
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& [name, f] : registry()) out.push_back(name);
    return out;
}

std::optional<ConvexSet> fixture_set(const std::string& name) {
    const auto it = registry().find(name);
    if (it == registry().end()) return std::nullopt;
    OracleSet o;
    o.violation = it->second.violation;
    o.member = [v = it->second.violation](const Vector& e) { return v(e) < 0.0; };
    o.name = name;
    return ConvexSet::oracle(it->second.dim, std::move(o), it->second.witness);
}

ProblemFile parse_problem_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // Byte offset to line and column.
        const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1;
        std::size_t line_start = 0;
        for (std::size_t i = 0; i < at; ++i) {
            if (text[i] == '\n') {
                ++line;
                line_start = i + 1;
            }
        }
        throw SchemaError(origin + ":" + std::to_string(line) + ":" + std::to_string(at - line_start + 1) +
                          ": malformed JSON");
    }
    try {
        object_at(doc, "");
        allow_keys(doc, "", {"version", "dimension", "A", "S", "x", "seminorm", "options"});
        const json& version = require(doc, "", "version");
        if (!version.is_number_integer() || version.get<long long>() != 1) fail("/version", "must be 1");
        const json& dimension = require(doc, "", "dimension");
        if (!dimension.is_number_unsigned() || dimension.get<long long>() < 1) {
            fail("/dimension", "expected a positive integer");
        }
        const int dim = dimension.get<int>();

        ConvexSet a = parse_set(require(doc, "", "A"), dim);
        Subspace s = parse_subspace(require(doc, "", "S"), dim);
        std::optional<Vector> x;
        if (doc.contains("x")) x = vector_of(doc["x"], "/x", dim);
        std::optional<Seminorm> p;
        if (doc.contains("seminorm")) p = parse_seminorm(doc["seminorm"], dim);
        const ProblemOptions options = doc.contains("options") ? parse_options(doc["options"]) : ProblemOptions{};
        return ProblemFile{dim, std::move(a), std::move(s), std::move(x), std::move(p), options};
    } catch (const SchemaError& e) {
        throw SchemaError(origin + ": " + e.what());
    } catch (const InputError& e) {
        // Library constructors reject the remaining malformed data.
        throw SchemaError(origin + ": " + e.what());
    }
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_problem_text(text.str(), path);
}

}  // namespace gaugesep::cli
