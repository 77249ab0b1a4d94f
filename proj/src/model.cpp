#include "fhn/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fhn {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool all_finite(std::span<const double> v) {
    for (double e : v) {
        if (!std::isfinite(e)) return false;
    }
    return true;
}

}  // namespace

CubicNonlinearity::CubicNonlinearity(double alpha_) : alpha(alpha_) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            "alpha must satisfy 0 < alpha < 1");
}

AssumptionEnvelope::AssumptionEnvelope(double lambda_, double beta_, double gamma_)
    : lambda(lambda_), beta(beta_), gamma(gamma_) {
    require(std::isfinite(lambda) && lambda > 0.0, "envelope lambda must be > 0");
    require(std::isfinite(beta) && beta > 0.0, "envelope beta must be > 0");
    require(std::isfinite(gamma) && gamma > 0.0, "envelope gamma must be > 0");
}

ModelParams::ModelParams(int n_, double a_, double b_, double c_, double delta_,
                         double p_, CubicNonlinearity nonlinearity_)
    : n(n_), a(a_), b(b_), c(c_), delta(delta_), p(p_), nonlinearity(nonlinearity_) {
    require(n >= 4, "n must be >= 4");
    require(std::isfinite(a) && a > 0.0, "a must be > 0");
    require(std::isfinite(b) && b > 0.0, "b must be > 0");
    require(std::isfinite(c) && c > 0.0, "c must be > 0");
    require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    require(std::isfinite(p) && p > 0.0, "p must be > 0");
}

NetworkState::NetworkState(std::vector<double> x_, std::vector<double> y_)
    : x(std::move(x_)), y(std::move(y_)) {
    require(x.size() == y.size(), "x and y must have the same length");
    require(all_finite(x) && all_finite(y), "state entries must be finite");
}

NetworkState NetworkState::zero(int n) {
    return NetworkState(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

NetworkState NetworkState::constant(int n, double x_value, double y_value) {
    return NetworkState(std::vector<double>(n, x_value), std::vector<double>(n, y_value));
}

NetworkState NetworkState::from_flat(std::span<const double> flat) {
    require(flat.size() % 2 == 0, "flat state must have even length");
    const std::size_t n = flat.size() / 2;
    return NetworkState(std::vector<double>(flat.begin(), flat.begin() + n),
                        std::vector<double>(flat.begin() + n, flat.end()));
}

std::vector<double> NetworkState::to_flat() const {
    std::vector<double> flat;
    flat.reserve(2 * x.size());
    flat.insert(flat.end(), x.begin(), x.end());
    flat.insert(flat.end(), y.begin(), y.end());
    return flat;
}

double NetworkState::norm_sq() const {
    double s = 0.0;
    for (double e : x) s += e * e;
    for (double e : y) s += e * e;
    return s;
}

double f_eval(double s, const CubicNonlinearity& nl) {
    return s * (s - nl.alpha) * (1.0 - s);
}

double f_prime(double s, const CubicNonlinearity& nl) {
    return -nl.alpha + 2.0 * (nl.alpha + 1.0) * s - 3.0 * s * s;
}

AssumptionEnvelope envelope_for_cubic(const CubicNonlinearity& nl) {
    const double ap1 = nl.alpha + 1.0;
    const double beta = 8.0 * ap1 * ap1 * ap1 * ap1;
    const double gamma = 1.0 + nl.alpha + nl.alpha * nl.alpha;
    return AssumptionEnvelope(0.5, beta, gamma);
}

std::vector<EnvelopeViolation> verify_envelope(const CubicNonlinearity& nl,
                                               double lambda, double beta, double gamma,
                                               double s_min, double s_max, int samples) {
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");
    require(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(s_min < s_max, "s_min must be < s_max");
    require(samples >= 2, "samples must be >= 2");

    std::vector<EnvelopeViolation> report;
    const double step = (s_max - s_min) / static_cast<double>(samples - 1);
    for (int k = 0; k < samples; ++k) {
        const double s = s_min + step * static_cast<double>(k);
        const double s2 = s * s;
        const bool quartic_failed = f_eval(s, nl) * s > -lambda * s2 * s2 + beta;
        const bool deriv_failed = f_prime(s, nl) > gamma;
        if (quartic_failed || deriv_failed) {
            report.push_back({s, quartic_failed, deriv_failed});
        }
    }
    return report;
}

std::vector<EnvelopeViolation> verify_envelope(const CubicNonlinearity& nl,
                                               const AssumptionEnvelope& env,
                                               double s_min, double s_max, int samples) {
    return verify_envelope(nl, env.lambda, env.beta, env.gamma, s_min, s_max, samples);
}

std::vector<double> laplacian_periodic(std::span<const double> x) {
    const std::size_t n = x.size();
    require(n >= 4, "ring needs n >= 4");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = x[i == 0 ? n - 1 : i - 1];
        const double right = x[i + 1 == n ? 0 : i + 1];
        out[i] = left - 2.0 * x[i] + right;
    }
    return out;
}

std::vector<double> feedback_controls(std::span<const double> x) {
    const std::size_t n = x.size();
    require(n >= 4, "ring needs n >= 4");
    std::vector<double> u(n, 0.0);
    u[0] = x[n - 1] - x[0];
    u[n - 1] = x[0] - x[n - 1];
    return u;
}

void rhs_flat(const ModelParams& params, std::span<const double> state,
              std::span<double> out) {
    const std::size_t n = static_cast<std::size_t>(params.n);
    require(state.size() == 2 * n, "state length does not match params.n");
    require(out.size() == 2 * n, "output length does not match params.n");

    const auto x = state.first(n);
    const auto y = state.subspan(n, n);
    const double gap = x[n - 1] - x[0];  // u_1; u_n = -gap

    for (std::size_t i = 0; i < n; ++i) {
        const double left = x[i == 0 ? n - 1 : i - 1];
        const double right = x[i + 1 == n ? 0 : i + 1];
        const double lap = left - 2.0 * x[i] + right;
        double u = 0.0;
        if (i == 0) u = gap;
        if (i == n - 1) u = -gap;
        out[i] = params.a * lap + f_eval(x[i], params.nonlinearity) - params.b * y[i] +
                 params.p * u;
        out[n + i] = params.c * x[i] - params.delta * y[i];
    }
}

NetworkState rhs(const NetworkState& state, const ModelParams& params) {
    const auto flat = state.to_flat();
    std::vector<double> out(flat.size());
    rhs_flat(params, flat, out);
    // derivative components may be non-finite; skip the constructor's check
    NetworkState d = NetworkState::zero(params.n);
    for (int i = 0; i < params.n; ++i) {
        d.x[i] = out[i];
        d.y[i] = out[params.n + i];
    }
    return d;
}

double divergence_residual(std::span<const double> x) {
    const std::size_t n = x.size();
    require(n >= 4, "ring needs n >= 4");
    const auto lap = laplacian_periodic(x);
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) inner += lap[i] * x[i];
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - x[i == 0 ? n - 1 : i - 1];
        diff_sq += d * d;
    }
    return std::fabs(inner + diff_sq);
}

DerivedConstants derived_constants(const ModelParams& params) {
    return derived_constants(params, envelope_for_cubic(params.nonlinearity));
}

DerivedConstants derived_constants(const ModelParams& params,
                                   const AssumptionEnvelope& env) {
    DerivedConstants k{};
    k.lambda = env.lambda;
    k.beta = env.beta;
    k.gamma = env.gamma;
    k.c1 = params.delta / (2.0 * params.b);

    const double s = params.delta * params.delta / (2.0 * params.b) + params.delta / 2.0 +
                     2.0 * params.c * params.c / params.delta;
    k.c2 = params.b / (4.0 * params.delta * env.lambda) * s * s;

    const double source = static_cast<double>(params.n) / params.delta *
                          (k.c2 + params.delta * env.beta / params.b);
    k.q = (1.0 + source) / std::min(k.c1, 1.0);

    k.sync_threshold =
        (1.0 + (params.delta + env.gamma + std::fabs(params.c - params.b)) / params.p) * k.q;
    return k;
}

double absorbing_entry_time(double rho, const ModelParams& params) {
    require(std::isfinite(rho) && rho >= 0.0, "rho must be >= 0");
    const double c1 = params.delta / (2.0 * params.b);
    const double arg = rho * std::max(c1, 1.0);
    if (arg <= 1.0) return 0.0;
    return std::log(arg) / params.delta;
}

}  // namespace fhn
