#include "fhn/config.hpp"

#include <cmath>
#include <set>

#include "fhn/sweep.hpp"
#include "json.hpp"

namespace fhn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_known_keys(const json& obj, const std::string& scope,
                      const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) {
            fail("unknown key: " + (scope.empty() ? it.key() : scope + "." + it.key()));
        }
    }
}

double get_double(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(scope + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& scope, const std::string& key,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(scope + "." + key + " must be an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        fail(where + " must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& scope, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(scope + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<double> get_double_list(const json& obj, const std::string& scope,
                                    const std::string& key,
                                    std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) fail(scope + "." + key + " must be a nonempty array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) fail(scope + "." + key + " must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

ModelParams parse_model(const json& m, std::optional<EnvelopeOverride>& envelope) {
    check_known_keys(m, "model", {"n", "a", "b", "c", "delta", "p", "alpha", "envelope"});
    const ModelParams base = baseline_model_params();
    const int n = get_int(m, "model", "n", base.n);
    const double a = get_double(m, "model", "a", base.a);
    const double b = get_double(m, "model", "b", base.b);
    const double c = get_double(m, "model", "c", base.c);
    const double delta = get_double(m, "model", "delta", base.delta);
    const double p = get_double(m, "model", "p", base.p);
    const double alpha = get_double(m, "model", "alpha", base.nonlinearity.alpha);

    if (n < 4) fail("model.n: n >= 4 is required");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("model.alpha: 0 < alpha < 1 is required");
    auto positive = [](double v, const char* key) {
        if (!(std::isfinite(v) && v > 0.0)) fail(std::string(key) + " must be > 0");
    };
    positive(a, "model.a");
    positive(b, "model.b");
    positive(c, "model.c");
    positive(delta, "model.delta");
    positive(p, "model.p");

    if (m.contains("envelope")) {
        const json& e = m.at("envelope");
        if (!e.is_object()) fail("model.envelope must be an object");
        check_known_keys(e, "model.envelope", {"lambda", "beta", "gamma"});
        EnvelopeOverride ov;
        ov.lambda = get_double(e, "model.envelope", "lambda", -1.0);
        ov.beta = get_double(e, "model.envelope", "beta", -1.0);
        ov.gamma = get_double(e, "model.envelope", "gamma", -1.0);
        auto nonneg = [](double v, const char* key) {
            if (!(std::isfinite(v) && v >= 0.0)) fail(std::string(key) + " must be >= 0");
        };
        nonneg(ov.lambda, "model.envelope.lambda");
        nonneg(ov.beta, "model.envelope.beta");
        nonneg(ov.gamma, "model.envelope.gamma");
        envelope = ov;
    }
    return ModelParams(n, a, b, c, delta, p, CubicNonlinearity(alpha));
}

IntegratorConfig parse_integ(const json& g, IntegMethod& method) {
    check_known_keys(g, "integ", {"dt", "t_end", "sample_stride", "rtol", "atol",
                                  "dt_min", "dt_max", "method"});
    const IntegratorConfig d;
    const std::string method_name = get_string(g, "integ", "method", "rk4");
    if (method_name == "rk4") {
        method = IntegMethod::rk4;
    } else if (method_name == "rk45") {
        method = IntegMethod::rk45;
    } else {
        fail("integ.method must be \"rk4\" or \"rk45\"");
    }
    try {
        return IntegratorConfig(get_double(g, "integ", "dt", d.dt),
                                get_double(g, "integ", "t_end", d.t_end),
                                get_int(g, "integ", "sample_stride", d.sample_stride),
                                get_double(g, "integ", "rtol", d.rtol),
                                get_double(g, "integ", "atol", d.atol),
                                get_double(g, "integ", "dt_min", d.dt_min),
                                get_double(g, "integ", "dt_max", d.dt_max));
    } catch (const std::invalid_argument& e) {
        fail(std::string("integ: ") + e.what());
    }
}

InitSpec parse_init(const json& g) {
    check_known_keys(g, "init", {"kind", "radius", "seed", "x", "y"});
    InitSpec spec;
    const std::string kind = get_string(g, "init", "kind", "random");
    if (kind == "random") {
        spec.kind = InitSpec::Kind::random;
        spec.radius = get_double(g, "init", "radius", spec.radius);
        if (!(std::isfinite(spec.radius) && spec.radius > 0.0))
            fail("init.radius must be > 0");
        if (g.contains("seed")) spec.seed = get_u64(g.at("seed"), "init.seed");
    } else if (kind == "zero") {
        spec.kind = InitSpec::Kind::zero;
    } else if (kind == "constant") {
        spec.kind = InitSpec::Kind::constant;
        spec.x_value = get_double(g, "init", "x", 0.0);
        spec.y_value = get_double(g, "init", "y", 0.0);
    } else if (kind == "explicit") {
        spec.kind = InitSpec::Kind::explicit_values;
        spec.x = get_double_list(g, "init", "x", {});
        spec.y = get_double_list(g, "init", "y", {});
        if (spec.x.empty() || spec.y.empty())
            fail("init.x and init.y are required for kind \"explicit\"");
    } else {
        fail("init.kind must be one of \"random\", \"zero\", \"constant\", \"explicit\"");
    }
    return spec;
}

SweepSpec parse_sweep(const json& g, const ModelParams& model) {
    check_known_keys(g, "sweep", {"p_values", "a_values", "alpha_values", "n_values",
                                  "seeds", "init_radius"});
    SweepSpec spec;
    spec.p_values = get_double_list(g, "sweep", "p_values", {model.p});
    spec.a_values = get_double_list(g, "sweep", "a_values", {model.a});
    spec.alpha_values =
        get_double_list(g, "sweep", "alpha_values", {model.nonlinearity.alpha});
    if (g.contains("n_values")) {
        const json& v = g.at("n_values");
        if (!v.is_array() || v.empty()) fail("sweep.n_values must be a nonempty array");
        for (const json& e : v) {
            if (!e.is_number_integer()) fail("sweep.n_values must contain integers");
            spec.n_values.push_back(e.get<int>());
        }
    } else {
        spec.n_values = {model.n};
    }
    if (g.contains("seeds")) {
        const json& v = g.at("seeds");
        if (!v.is_array() || v.empty()) fail("sweep.seeds must be a nonempty array");
        spec.seeds.clear();
        for (const json& e : v) spec.seeds.push_back(get_u64(e, "sweep.seeds"));
    }
    spec.init_radius = get_double(g, "sweep", "init_radius", spec.init_radius);
    if (!(std::isfinite(spec.init_radius) && spec.init_radius > 0.0))
        fail("sweep.init_radius must be > 0");
    return spec;
}

}  // namespace

NetworkState InitSpec::make(int n) const {
    switch (kind) {
        case Kind::zero:
            return NetworkState::zero(n);
        case Kind::constant:
            return NetworkState::constant(n, x_value, y_value);
        case Kind::explicit_values: {
            if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
                fail("init.x/init.y length must equal model.n");
            return NetworkState(x, y);
        }
        case Kind::random:
        default:
            return random_initial(n, radius, seed);
    }
}

AssumptionEnvelope EnvelopeOverride::validated() const {
    if (!(lambda > 0.0 && beta > 0.0 && gamma > 0.0))
        fail("model.envelope fields must be > 0 for this command");
    return AssumptionEnvelope(lambda, beta, gamma);
}

ModelParams baseline_model_params() {
    return ModelParams(4, 1.0, 1.0, 0.1, 0.2, 1.0, CubicNonlinearity(0.5));
}

RunConfig::RunConfig() : model(baseline_model_params()) {}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed configuration document: ") + e.what());
    }
    if (!doc.is_object()) fail("configuration document must be a JSON object");

    check_known_keys(doc, "", {"command", "model", "integ", "sweep", "init", "rho",
                               "output_path", "precision"});

    RunConfig cfg;
    const std::string cmd = get_string(doc, "", "command", "constants");
    if (cmd == "constants") cfg.command = Command::constants;
    else if (cmd == "simulate") cfg.command = Command::simulate;
    else if (cmd == "verify") cfg.command = Command::verify;
    else if (cmd == "sweep") cfg.command = Command::sweep;
    else fail("command must be one of constants, simulate, verify, sweep");

    try {
        if (doc.contains("model")) {
            if (!doc.at("model").is_object()) fail("model must be an object");
            cfg.model = parse_model(doc.at("model"), cfg.envelope);
        }
        if (doc.contains("integ")) {
            if (!doc.at("integ").is_object()) fail("integ must be an object");
            cfg.integ = parse_integ(doc.at("integ"), cfg.method);
        }
        if (doc.contains("init")) {
            if (!doc.at("init").is_object()) fail("init must be an object");
            cfg.init = parse_init(doc.at("init"));
        }
        if (doc.contains("sweep")) {
            if (!doc.at("sweep").is_object()) fail("sweep must be an object");
            cfg.sweep = parse_sweep(doc.at("sweep"), cfg.model);
        } else {
            cfg.sweep = parse_sweep(json::object(), cfg.model);
        }
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }

    cfg.rho = get_double(doc, "", "rho", cfg.rho);
    if (!(std::isfinite(cfg.rho) && cfg.rho >= 0.0)) fail("rho must be >= 0");
    cfg.output_path = get_string(doc, "", "output_path", "");
    cfg.precision = get_int(doc, "", "precision", cfg.precision);
    if (cfg.precision < 1 || cfg.precision > 17) fail("precision must be in [1, 17]");
    return cfg;
}

void apply_override(std::string& doc_text, const std::string& path,
                    const std::string& value) {
    json doc;
    try {
        doc = json::parse(doc_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed configuration document: ") + e.what());
    }
    json parsed_value;
    try {
        parsed_value = json::parse(value);
    } catch (const json::parse_error&) {
        parsed_value = value;  // bare words become strings
    }

    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) fail("empty key in override path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = parsed_value;
            break;
        }
        node = &(*node)[key];
        if (!node->is_object() && !node->is_null()) {
            fail("override path " + path + " does not name a nested key");
        }
        start = dot + 1;
    }
    doc_text = doc.dump();
}

}  // namespace fhn
