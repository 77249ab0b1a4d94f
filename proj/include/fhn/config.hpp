#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/integrator.hpp"
#include "fhn/model.hpp"

namespace fhn {

// Invalid document, unknown key, or type invariant violation; the message
// names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { constants, simulate, verify, sweep };

enum class IntegMethod { rk4, rk45 };

// Initial data for `simulate`.
struct InitSpec {
    enum class Kind { random, zero, constant, explicit_values };
    Kind kind = Kind::random;
    double radius = 2.0;
    std::uint64_t seed = 0;
    double x_value = 0.0;  // constant kind
    double y_value = 0.0;
    std::vector<double> x;  // explicit kind
    std::vector<double> y;

    NetworkState make(int n) const;
};

// Raw user-supplied envelope; may contain zeros so `verify` can falsify it.
struct EnvelopeOverride {
    double lambda = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    // Throws ConfigError unless all fields are strictly positive.
    AssumptionEnvelope validated() const;
};

struct SweepSpec {
    std::vector<double> p_values;
    std::vector<double> a_values;
    std::vector<double> alpha_values;
    std::vector<int> n_values;
    std::vector<std::uint64_t> seeds{0};
    double init_radius = 2.0;
};

struct RunConfig {
    Command command = Command::constants;
    ModelParams model;
    std::optional<EnvelopeOverride> envelope;
    IntegratorConfig integ;
    IntegMethod method = IntegMethod::rk4;
    InitSpec init;
    SweepSpec sweep;
    double rho = 100.0;
    std::string output_path;  // stem; empty means derive from command name
    int precision = 17;

    RunConfig();
};

ModelParams baseline_model_params();

// Parses and validates the JSON configuration document. Flags are applied
// beforehand as dotted-path overrides (see apply_override).
RunConfig parse_config(const std::string& text);

// In-place override on the raw document: path "model.delta", value "0.2".
// The value is parsed as JSON when possible, otherwise taken as a string.
void apply_override(std::string& doc_text, const std::string& path,
                    const std::string& value);

}  // namespace fhn
