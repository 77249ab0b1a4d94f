#pragma once

#include <optional>
#include <vector>

#include "fhn/integrator.hpp"
#include "fhn/model.hpp"

namespace fhn {

// Adjacent-cell differences V_i = x_i - x_{i-1}, W_i = y_i - y_{i-1} with
// ring indexing (index 0 wraps to n). Both sum to zero by telescoping.
struct DifferenceState {
    std::vector<double> v;
    std::vector<double> w;
};

struct DiagnosticsSeries {
    std::vector<double> times;
    std::vector<double> weighted_energy;  // sum C1 x_i^2 + y_i^2
    std::vector<double> plain_energy;     // sum x_i^2 + y_i^2
    std::vector<double> diff_energy;      // sum V_i^2 + W_i^2
    std::vector<double> gap;              // x_n - x_1
    std::vector<double> bound;            // dissipative bound at each time
};

struct SyncVerdict {
    bool synchronized = false;
    std::optional<double> t_sync;       // first time diff_energy <= eps_sync
    std::optional<double> fitted_rate;  // decay rate of diff_energy, when fittable
    bool threshold_satisfied_tail = false;
    double tail_min_gap_sq = 0.0;
    // fitted_rate >= 0.8*delta; present only when the gap-threshold premises
    // held at every sample of the fit window and a rate was fitted
    std::optional<bool> rate_meets_delta;
};

struct BoundViolation {
    double time;
    double energy;
    double bound;
};

struct SyncInequalityReport {
    std::vector<double> failure_times;
    bool premises_ever_active = false;
    long checked_points = 0;  // interior samples where both premises held
};

double weighted_energy(const NetworkState& state, double c1);
double plain_energy(const NetworkState& state);

// Right side of the uniform solution estimate:
// (1/min{C1,1}) [ e^{-delta t} Ew(0) + (n/delta)(C2 + delta*beta/b) ].
double dissipative_bound(double t, double ew0, const ModelParams& params);

DifferenceState difference_state(const NetworkState& state);
double difference_energy(const NetworkState& state);
double boundary_gap(const NetworkState& state);

// |sum_i p (u_i - u_{i-1})(x_i - x_{i-1}) - p(-3 g^2 + g (x_{n-1} - x_2))|
// with g = x_n - x_1 and u_0 = u_n; zero in exact arithmetic.
double feedback_sum_identity_residual(const NetworkState& state, double p);

DiagnosticsSeries build_series(const Trajectory& traj, const ModelParams& params);

// Checks plain_energy(t) <= bound(t) * (1 + tol) at every recorded sample.
std::vector<BoundViolation> check_dissipative_bound(const Trajectory& traj,
                                                    const ModelParams& params,
                                                    double tol);

// At each interior sample where plain_energy < Q and p*gap^2 exceeds
// (delta+gamma+|c-b|+p)*Q, checks the damping inequality
//   dD/dt + 2*delta*D < slack * (1 + D)
// with dD/dt from centered differences on the recorded samples.
SyncInequalityReport check_sync_inequality(const Trajectory& traj,
                                           const ModelParams& params, double slack);

// Negated least-squares slope of ln(values) vs times over [t_from, t_to];
// samples at or below 1e-30 are ignored. Empty when fewer than two usable
// samples remain.
std::optional<double> fit_decay_rate(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double t_from, double t_to);

SyncVerdict classify_sync(const Trajectory& traj, const ModelParams& params,
                          double eps_sync = 1e-8, double tail_fraction = 0.25);

}  // namespace fhn
