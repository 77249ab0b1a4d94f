#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fhn/model.hpp"

namespace fhn {

// Derivative of a flat state vector: deriv(t, state, out).
using FlatDeriv =
    std::function<void(double, std::span<const double>, std::span<double>)>;

struct IntegratorConfig {
    explicit IntegratorConfig(double dt = 1e-3, double t_end = 200.0,
                              int sample_stride = 10, double rtol = 1e-6,
                              double atol = 1e-9, double dt_min = 1e-10,
                              double dt_max = 1.0);
    double dt;          // fixed-mode step, also the adaptive starting step
    double t_end;
    int sample_stride;  // record every k-th step (accepted step in adaptive mode)
    double rtol;
    double atol;
    double dt_min;
    double dt_max;
};

enum class IntegrationFailure {
    none,
    non_finite_state,   // blow-up: step size too large for the dynamics
    dt_min_underflow,   // adaptive controller rejected a step at dt_min
};

struct Trajectory {
    std::vector<double> times;
    std::vector<NetworkState> states;
    long step_count = 0;
    long rejected_steps = 0;
    IntegrationFailure failure = IntegrationFailure::none;
    double failure_time = 0.0;

    bool failed() const { return failure != IntegrationFailure::none; }
    const NetworkState& initial() const { return states.front(); }
    const NetworkState& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

// One classical 4-stage Runge-Kutta step on an arbitrary flat system.
std::vector<double> rk4_step(const FlatDeriv& deriv, std::span<const double> state,
                             double t, double dt);

Trajectory integrate_fixed(const ModelParams& params, const NetworkState& init,
                           const IntegratorConfig& cfg);

// Dormand-Prince 4(5) embedded pair. Steps are accepted when the RMS of the
// component errors scaled by atol + rtol*|component| is <= 1; the next step
// is 0.9 * dt * err^(-1/5) with growth/shrink clamped to [0.2, 5] and the
// absolute step clamped to [dt_min, dt_max].
Trajectory integrate_adaptive(const ModelParams& params, const NetworkState& init,
                              const IntegratorConfig& cfg);

// Least-squares slope of log(error) vs log(dt) for fixed-step runs, errors
// measured in max norm against the finest-step solution (which is excluded
// from the fit). Returns +inf when an error degenerates to zero.
double convergence_order(const ModelParams& params, const NetworkState& init,
                         double t_end, const std::vector<double>& dts);

}  // namespace fhn
