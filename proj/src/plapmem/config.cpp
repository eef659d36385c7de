#include "plapmem/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plapmem/analysis.hpp"
#include "plapmem/errors.hpp"
#include "plapmem/experiments.hpp"

namespace plapmem {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

double number_field(const json& value, const std::string& field) {
    if (!value.is_number()) {
        bad_field(field, "expected a number");
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
        bad_field(field, "must be finite");
    }
    return v;
}

int int_field(const json& value, const std::string& field) {
    if (value.is_number_integer()) {
        const auto v = value.get<long long>();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            bad_field(field, "out of range");
        }
        return static_cast<int>(v);
    }
    if (value.is_number_float()) {
        const double v = value.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9) {
            return static_cast<int>(v);
        }
    }
    bad_field(field, "expected an integer");
}

std::string string_field(const json& value, const std::string& field) {
    if (!value.is_string()) {
        bad_field(field, "expected a string");
    }
    return value.get<std::string>();
}

Scheme parse_scheme(const std::string& s) {
    if (s == "auto") return Scheme::Auto;
    if (s == "A") return Scheme::A;
    if (s == "B") return Scheme::B;
    bad_field("scheme", "expected \"auto\", \"A\" or \"B\", got \"" + s + "\"");
}

QuadratureMode parse_mode(const std::string& s) {
    if (s == "consistent") return QuadratureMode::Consistent;
    if (s == "literal") return QuadratureMode::Literal;
    bad_field("quadrature_mode", "expected \"consistent\" or \"literal\", got \"" + s + "\"");
}

ProblemKind parse_problem(const std::string& s) {
    if (s == "manufactured") return ProblemKind::Manufactured;
    if (s == "quartic") return ProblemKind::Quartic;
    if (s == "gap_cubic") return ProblemKind::GapCubic;
    if (s == "gap_septic") return ProblemKind::GapSeptic;
    bad_field("problem",
              "expected \"manufactured\", \"quartic\", \"gap_cubic\" or \"gap_septic\", got \"" +
                  s + "\"");
}

void read_domain(const json& d, RunConfig& c) {
    if (d.is_array()) {
        if (d.size() != 2) {
            bad_field("domain", "expected [a, b]");
        }
        c.a = number_field(d[0], "domain[0]");
        c.b = number_field(d[1], "domain[1]");
        return;
    }
    if (d.is_object()) {
        for (const auto& [key, _] : d.items()) {
            if (key != "a" && key != "b") {
                bad_field("domain." + key, "unknown key");
            }
        }
        if (!d.contains("a") || !d.contains("b")) {
            bad_field("domain", "expected both a and b");
        }
        c.a = number_field(d["a"], "domain.a");
        c.b = number_field(d["b"], "domain.b");
        return;
    }
    bad_field("domain", "expected {a, b} or [a, b]");
}

std::optional<double> read_kernel(const json& k) {
    if (!k.is_object()) {
        bad_field("kernel", "expected an object");
    }
    for (const auto& [key, _] : k.items()) {
        if (key != "type" && key != "lambda") {
            bad_field("kernel." + key, "unknown key");
        }
    }
    if (k.contains("type")) {
        const std::string type = string_field(k["type"], "kernel.type");
        if (type != "exponential") {
            bad_field("kernel.type", "only \"exponential\" is supported, got \"" + type + "\"");
        }
    }
    if (k.contains("lambda")) {
        return number_field(k["lambda"], "kernel.lambda");
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Auto: return "auto";
        case Scheme::A: return "A";
        case Scheme::B: return "B";
    }
    return "auto";
}

std::string_view to_string(QuadratureMode mode) {
    return mode == QuadratureMode::Literal ? "literal" : "consistent";
}

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Manufactured: return "manufactured";
        case ProblemKind::Quartic: return "quartic";
        case ProblemKind::GapCubic: return "gap_cubic";
        case ProblemKind::GapSeptic: return "gap_septic";
    }
    return "manufactured";
}

void RunConfig::validate() const {
    auto finite = [](double v, const char* field) {
        if (!std::isfinite(v)) {
            bad_field(field, "must be finite");
        }
    };
    finite(a, "domain.a");
    finite(b, "domain.b");
    finite(T, "T");
    finite(p, "p");
    finite(lambda, "kernel.lambda");
    finite(tol, "tol");
    finite(epsilon, "epsilon");
    if (!(b > a)) bad_field("domain", "requires b > a");
    if (!(T > 0.0)) bad_field("T", "must be > 0");
    if (!(p > 1.0)) bad_field("p", "must be > 1");
    if (r < 1 || r > kMaxDegree) bad_field("r", "must lie in [1, " + std::to_string(kMaxDegree) + "]");
    if (m < 1) bad_field("m", "must be >= 1");
    if (N < 1) bad_field("N", "must be >= 1");
    if (!(tol > 0.0)) bad_field("tol", "must be > 0");
    if (max_iter < 2) bad_field("max_iter", "must be >= 2");
    if (epsilon < 0.0) bad_field("epsilon", "must be >= 0 once resolved");
    if (p < 2.0 && epsilon == 0.0) bad_field("epsilon", "must be > 0 when p < 2");
    if (scheme == Scheme::Auto) bad_field("scheme", "unresolved");
    if (quadrature_points < 1 || quadrature_points > kMaxQuadraturePoints) {
        bad_field("quadrature_points",
                  "must lie in [1, " + std::to_string(kMaxQuadraturePoints) + "]");
    }
    for (double t : snapshot_times) {
        if (!std::isfinite(t) || t < 0.0 || t > T * (1.0 + 1e-12)) {
            bad_field("snapshot_times", "entries must lie in [0, T]");
        }
    }
    if (problem == ProblemKind::Manufactured && (a != 0.0 || b != 1.0)) {
        bad_field("domain", "the manufactured problem is defined on [0, 1]");
    }
    if (output_dir.empty()) bad_field("output_dir", "must not be empty");
}

RunConfig resolve(RunConfig c) {
    if (!std::isfinite(c.p) || !(c.p > 1.0)) {
        bad_field("p", "must be a finite value > 1");
    }
    c.epsilon = resolve_epsilon(c.p, c.epsilon);
    c.scheme = select_scheme(c.p, c.scheme);
    if (c.quadrature_points == 0) {
        c.quadrature_points = c.r + 2;
    }
    c.validate();
    return c;
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known = {
        "domain", "T", "p", "kernel", "lambda", "r", "m", "N", "tol", "max_iter", "epsilon",
        "scheme", "quadrature_points", "quadrature_mode", "problem", "snapshot_times",
        "output_dir"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) {
            bad_field(key, "unknown key");
        }
    }
    for (const char* required : {"p", "r", "m", "N", "T"}) {
        if (!doc.contains(required)) {
            bad_field(required, "missing");
        }
    }

    RunConfig c;
    if (doc.contains("domain")) read_domain(doc["domain"], c);
    c.T = number_field(doc["T"], "T");
    c.p = number_field(doc["p"], "p");
    c.r = int_field(doc["r"], "r");
    c.m = int_field(doc["m"], "m");
    c.N = int_field(doc["N"], "N");

    std::optional<double> kernel_lambda;
    if (doc.contains("kernel")) kernel_lambda = read_kernel(doc["kernel"]);
    std::optional<double> top_lambda;
    if (doc.contains("lambda")) top_lambda = number_field(doc["lambda"], "lambda");
    if (kernel_lambda && top_lambda && *kernel_lambda != *top_lambda) {
        bad_field("lambda", "conflicts with kernel.lambda");
    }
    c.lambda = kernel_lambda.value_or(top_lambda.value_or(0.0));

    if (doc.contains("tol")) c.tol = number_field(doc["tol"], "tol");
    if (doc.contains("max_iter")) c.max_iter = int_field(doc["max_iter"], "max_iter");
    if (doc.contains("epsilon") && !doc["epsilon"].is_null()) {
        c.epsilon = number_field(doc["epsilon"], "epsilon");
        if (c.epsilon < 0.0) bad_field("epsilon", "must be >= 0");
    }
    if (doc.contains("scheme")) c.scheme = parse_scheme(string_field(doc["scheme"], "scheme"));
    if (doc.contains("quadrature_points")) {
        c.quadrature_points = int_field(doc["quadrature_points"], "quadrature_points");
        if (c.quadrature_points < 1) bad_field("quadrature_points", "must be >= 1");
    }
    if (doc.contains("quadrature_mode")) {
        c.quadrature_mode = parse_mode(string_field(doc["quadrature_mode"], "quadrature_mode"));
    }
    if (doc.contains("problem")) c.problem = parse_problem(string_field(doc["problem"], "problem"));
    if (doc.contains("snapshot_times")) {
        const json& s = doc["snapshot_times"];
        if (!s.is_array()) bad_field("snapshot_times", "expected a list of times");
        for (std::size_t i = 0; i < s.size(); ++i) {
            c.snapshot_times.push_back(
                number_field(s[i], "snapshot_times[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("output_dir")) c.output_dir = string_field(doc["output_dir"], "output_dir");
    return resolve(std::move(c));
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading config file " + path.string());
    }
    return parse_config_text(buf.str());
}

std::string config_to_json(const RunConfig& c) {
    json doc = json::object();
    doc["domain"] = {{"a", c.a}, {"b", c.b}};
    doc["T"] = c.T;
    doc["p"] = c.p;
    doc["kernel"] = {{"type", "exponential"}, {"lambda", c.lambda}};
    doc["r"] = c.r;
    doc["m"] = c.m;
    doc["N"] = c.N;
    doc["tol"] = c.tol;
    doc["max_iter"] = c.max_iter;
    doc["epsilon"] = c.epsilon;
    doc["scheme"] = std::string(to_string(c.scheme));
    doc["quadrature_points"] = c.quadrature_points;
    doc["quadrature_mode"] = std::string(to_string(c.quadrature_mode));
    doc["problem"] = std::string(to_string(c.problem));
    doc["snapshot_times"] = c.snapshot_times;
    doc["output_dir"] = c.output_dir;
    return doc.dump(2) + "\n";
}

ProblemSpec make_problem(const RunConfig& c) {
    ProblemSpec problem;
    switch (c.problem) {
        case ProblemKind::Manufactured:
            problem = manufactured_example1(c.p, c.lambda, c.T);
            break;
        case ProblemKind::Quartic:
            problem.u0 = quartic_datum;
            break;
        case ProblemKind::GapCubic:
            problem.u0 = gap_cubic_datum;
            break;
        case ProblemKind::GapSeptic:
            problem.u0 = gap_septic_datum;
            break;
    }
    problem.a = c.a;
    problem.b = c.b;
    problem.T = c.T;
    problem.p = c.p;
    problem.kernel = KernelSpec::exponential(c.lambda);
    return problem;
}

Mesh1D make_mesh(const RunConfig& c) { return build_uniform_mesh(c.a, c.b, c.m, c.r); }

SolverConfig make_solver_config(const RunConfig& c) {
    SolverConfig s;
    s.p = c.p;
    s.delta = c.delta();
    s.steps = c.N;
    s.tol = c.tol;
    s.max_iter = c.max_iter;
    s.scheme = c.scheme;
    s.epsilon = c.epsilon;
    s.quadrature_points = c.quadrature_points;
    s.quadrature_mode = c.quadrature_mode;
    return s;
}

}  // namespace plapmem
