#include "fhn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fhn {

namespace {

bool all_finite(std::span<const double> v) {
    for (double e : v) {
        if (!std::isfinite(e)) return false;
    }
    return true;
}

struct Rk4Scratch {
    explicit Rk4Scratch(std::size_t m) : k1(m), k2(m), k3(m), k4(m), tmp(m) {}
    std::vector<double> k1, k2, k3, k4, tmp;
};

void rk4_step_into(const FlatDeriv& deriv, std::span<const double> y, double t,
                   double dt, Rk4Scratch& s, std::span<double> out) {
    const std::size_t m = y.size();
    deriv(t, y, s.k1);
    for (std::size_t i = 0; i < m; ++i) s.tmp[i] = y[i] + 0.5 * dt * s.k1[i];
    deriv(t + 0.5 * dt, s.tmp, s.k2);
    for (std::size_t i = 0; i < m; ++i) s.tmp[i] = y[i] + 0.5 * dt * s.k2[i];
    deriv(t + 0.5 * dt, s.tmp, s.k3);
    for (std::size_t i = 0; i < m; ++i) s.tmp[i] = y[i] + dt * s.k3[i];
    deriv(t + dt, s.tmp, s.k4);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = y[i] + dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
    }
}

FlatDeriv model_deriv(const ModelParams& params) {
    return [params](double, std::span<const double> y, std::span<double> dydt) {
        rhs_flat(params, y, dydt);
    };
}

void record_sample(Trajectory& traj, double t, std::span<const double> flat) {
    traj.times.push_back(t);
    traj.states.push_back(NetworkState::from_flat(flat));
}

// Dormand-Prince 5(4) tableau; the last stage row doubles as the 5th-order
// weights (FSAL).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,  0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

IntegratorConfig::IntegratorConfig(double dt_, double t_end_, int sample_stride_,
                                   double rtol_, double atol_, double dt_min_,
                                   double dt_max_)
    : dt(dt_), t_end(t_end_), sample_stride(sample_stride_), rtol(rtol_), atol(atol_),
      dt_min(dt_min_), dt_max(dt_max_) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    require(std::isfinite(t_end) && t_end > 0.0, "t_end must be > 0");
    require(sample_stride >= 1, "sample_stride must be >= 1");
    require(std::isfinite(rtol) && rtol > 0.0, "rtol must be > 0");
    require(std::isfinite(atol) && atol > 0.0, "atol must be > 0");
    require(std::isfinite(dt_min) && dt_min > 0.0, "dt_min must be > 0");
    require(std::isfinite(dt_max) && dt_min <= dt_max, "need 0 < dt_min <= dt_max");
}

std::vector<double> rk4_step(const FlatDeriv& deriv, std::span<const double> state,
                             double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    Rk4Scratch scratch(state.size());
    std::vector<double> out(state.size());
    rk4_step_into(deriv, state, t, dt, scratch, out);
    return out;
}

Trajectory integrate_fixed(const ModelParams& params, const NetworkState& init,
                           const IntegratorConfig& cfg) {
    if (static_cast<int>(init.size()) != params.n)
        throw std::invalid_argument("initial state length does not match params.n");

    const auto deriv = model_deriv(params);
    std::vector<double> y = init.to_flat();
    std::vector<double> y_next(y.size());
    Rk4Scratch scratch(y.size());

    long n_steps = std::llround(cfg.t_end / cfg.dt);
    if (n_steps < 1) n_steps = 1;

    Trajectory traj;
    record_sample(traj, 0.0, y);
    for (long k = 1; k <= n_steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * cfg.dt;
        const double t = static_cast<double>(k) * cfg.dt;
        rk4_step_into(deriv, y, t_prev, cfg.dt, scratch, y_next);
        traj.step_count += 1;
        if (!all_finite(y_next)) {
            traj.failure = IntegrationFailure::non_finite_state;
            traj.failure_time = t;
            return traj;
        }
        y.swap(y_next);
        if (k % cfg.sample_stride == 0 || k == n_steps) record_sample(traj, t, y);
    }
    return traj;
}

Trajectory integrate_adaptive(const ModelParams& params, const NetworkState& init,
                              const IntegratorConfig& cfg) {
    if (static_cast<int>(init.size()) != params.n)
        throw std::invalid_argument("initial state length does not match params.n");

    const auto deriv = model_deriv(params);
    const std::size_t m = 2 * static_cast<std::size_t>(params.n);

    std::vector<double> y = init.to_flat();
    std::vector<std::vector<double>> k(7, std::vector<double>(m));
    std::vector<double> y_stage(m), y5(m);

    Trajectory traj;
    record_sample(traj, 0.0, y);

    double t = 0.0;
    double dt = std::clamp(cfg.dt, cfg.dt_min, cfg.dt_max);
    bool have_k1 = false;  // FSAL: k7 of an accepted step is k1 of the next
    long accepted_since_record = 0;

    while (t < cfg.t_end) {
        const bool final_step = t + dt >= cfg.t_end;
        const double h = final_step ? cfg.t_end - t : dt;

        if (!have_k1) deriv(t, y, k[0]);
        for (int stage = 1; stage < 7; ++stage) {
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int j = 0; j < stage; ++j) acc += kA[stage][j] * k[j][i];
                y_stage[i] = y[i] + h * acc;
            }
            deriv(t + kC[stage] * h, y_stage, k[stage]);
        }
        // stage 7 was evaluated at y5 (a71..a76 equal the 5th-order weights)
        for (std::size_t i = 0; i < m; ++i) y5[i] = y_stage[i];

        double err_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double e = 0.0;
            for (int j = 0; j < 7; ++j) e += (kB5[j] - kB4[j]) * k[j][i];
            e *= h;
            const double scale =
                cfg.atol + cfg.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
            const double r = e / scale;
            err_sq += r * r;
        }
        double err = std::sqrt(err_sq / static_cast<double>(m));
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = final_step ? cfg.t_end : t + h;
            y.swap(y5);
            k[0].swap(k[6]);
            have_k1 = true;
            traj.step_count += 1;
            accepted_since_record += 1;
            if (!all_finite(y)) {
                traj.failure = IntegrationFailure::non_finite_state;
                traj.failure_time = t;
                return traj;
            }
            if (accepted_since_record >= cfg.sample_stride || t >= cfg.t_end) {
                record_sample(traj, t, y);
                accepted_since_record = 0;
            }
        } else {
            traj.rejected_steps += 1;
            have_k1 = false;
            if (h <= cfg.dt_min * (1.0 + 1e-12)) {
                traj.failure = IntegrationFailure::dt_min_underflow;
                traj.failure_time = t;
                return traj;
            }
        }

        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        dt = std::clamp(h * factor, cfg.dt_min, cfg.dt_max);
    }
    return traj;
}

double convergence_order(const ModelParams& params, const NetworkState& init,
                         double t_end, const std::vector<double>& dts) {
    if (dts.size() < 3) throw std::invalid_argument("need at least 3 step sizes");
    for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
        if (!(dts[i] > dts[i + 1]))
            throw std::invalid_argument("step sizes must be strictly decreasing");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");

    auto final_state = [&](double dt) {
        IntegratorConfig cfg(dt, t_end, std::numeric_limits<int>::max());
        Trajectory traj = integrate_fixed(params, init, cfg);
        if (traj.failed()) throw std::runtime_error("integration blew up during order study");
        return traj.final_state().to_flat();
    };

    const auto reference = final_state(dts.back());
    std::vector<double> log_dt, log_err;
    for (std::size_t j = 0; j + 1 < dts.size(); ++j) {
        const auto yj = final_state(dts[j]);
        double err = 0.0;
        for (std::size_t i = 0; i < yj.size(); ++i)
            err = std::max(err, std::fabs(yj[i] - reference[i]));
        if (err == 0.0) return std::numeric_limits<double>::infinity();
        log_dt.push_back(std::log(dts[j]));
        log_err.push_back(std::log(err));
    }

    const std::size_t k = log_dt.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += log_dt[i];
        my += log_err[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxy += (log_dt[i] - mx) * (log_err[i] - my);
        sxx += (log_dt[i] - mx) * (log_dt[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace fhn
