#include "fhn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fhn {

namespace {

constexpr double kFitFloor = 1e-30;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double weighted_energy(const NetworkState& state, double c1) {
    require(c1 > 0.0, "c1 must be > 0");
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        e += c1 * state.x[i] * state.x[i] + state.y[i] * state.y[i];
    return e;
}

double plain_energy(const NetworkState& state) {
    return state.norm_sq();
}

double dissipative_bound(double t, double ew0, const ModelParams& params) {
    require(t >= 0.0, "t must be >= 0");
    require(ew0 >= 0.0, "ew0 must be >= 0");
    const DerivedConstants k = derived_constants(params);
    const double source = static_cast<double>(params.n) / params.delta *
                          (k.c2 + params.delta * k.beta / params.b);
    return (std::exp(-params.delta * t) * ew0 + source) / std::min(k.c1, 1.0);
}

DifferenceState difference_state(const NetworkState& state) {
    const std::size_t n = state.size();
    require(n >= 4, "ring needs n >= 4");
    DifferenceState d;
    d.v.resize(n);
    d.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = i == 0 ? n - 1 : i - 1;
        d.v[i] = state.x[i] - state.x[prev];
        d.w[i] = state.y[i] - state.y[prev];
    }
    return d;
}

double difference_energy(const NetworkState& state) {
    const DifferenceState d = difference_state(state);
    double e = 0.0;
    for (std::size_t i = 0; i < d.v.size(); ++i) e += d.v[i] * d.v[i] + d.w[i] * d.w[i];
    return e;
}

double boundary_gap(const NetworkState& state) {
    require(state.size() >= 4, "ring needs n >= 4");
    return state.x[state.size() - 1] - state.x[0];
}

double feedback_sum_identity_residual(const NetworkState& state, double p) {
    const std::size_t n = state.size();
    require(n >= 4, "ring needs n >= 4");
    const auto u = feedback_controls(state.x);

    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = i == 0 ? n - 1 : i - 1;
        direct += p * (u[i] - u[prev]) * (state.x[i] - state.x[prev]);
    }

    const double g = state.x[n - 1] - state.x[0];
    const double closed = p * (-3.0 * g * g + g * (state.x[n - 2] - state.x[1]));
    return std::fabs(direct - closed);
}

DiagnosticsSeries build_series(const Trajectory& traj, const ModelParams& params) {
    require(!traj.states.empty(), "trajectory is empty");
    const DerivedConstants k = derived_constants(params);
    const double ew0 = weighted_energy(traj.initial(), k.c1);

    DiagnosticsSeries s;
    const std::size_t m = traj.states.size();
    s.times = traj.times;
    s.weighted_energy.reserve(m);
    s.plain_energy.reserve(m);
    s.diff_energy.reserve(m);
    s.gap.reserve(m);
    s.bound.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const NetworkState& st = traj.states[i];
        s.weighted_energy.push_back(weighted_energy(st, k.c1));
        s.plain_energy.push_back(plain_energy(st));
        s.diff_energy.push_back(difference_energy(st));
        s.gap.push_back(boundary_gap(st));
        s.bound.push_back(dissipative_bound(traj.times[i], ew0, params));
    }
    return s;
}

std::vector<BoundViolation> check_dissipative_bound(const Trajectory& traj,
                                                    const ModelParams& params,
                                                    double tol) {
    require(!traj.states.empty(), "trajectory is empty");
    const DerivedConstants k = derived_constants(params);
    const double ew0 = weighted_energy(traj.initial(), k.c1);

    std::vector<BoundViolation> violations;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double energy = plain_energy(traj.states[i]);
        const double bound = dissipative_bound(traj.times[i], ew0, params);
        if (energy > bound * (1.0 + tol)) {
            violations.push_back({traj.times[i], energy, bound});
        }
    }
    return violations;
}

SyncInequalityReport check_sync_inequality(const Trajectory& traj,
                                           const ModelParams& params, double slack) {
    require(traj.states.size() >= 3, "need at least 3 samples");
    const DerivedConstants k = derived_constants(params);
    const double gap_level =
        (params.delta + k.gamma + std::fabs(params.c - params.b) + params.p) * k.q;

    const std::size_t m = traj.states.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = difference_energy(traj.states[i]);

    SyncInequalityReport report;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double energy = plain_energy(traj.states[i]);
        const double gap = boundary_gap(traj.states[i]);
        const bool premises =
            energy < k.q && params.p * gap * gap > gap_level;
        if (!premises) continue;
        report.premises_ever_active = true;
        report.checked_points += 1;
        const double dddt =
            (d[i + 1] - d[i - 1]) / (traj.times[i + 1] - traj.times[i - 1]);
        if (dddt + 2.0 * params.delta * d[i] >= slack * (1.0 + d[i])) {
            report.failure_times.push_back(traj.times[i]);
        }
    }
    return report;
}

std::optional<double> fit_decay_rate(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double t_from, double t_to) {
    require(times.size() == values.size(), "times/values length mismatch");
    std::vector<double> t, logv;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_from || times[i] > t_to) continue;
        if (!(values[i] > kFitFloor)) continue;
        t.push_back(times[i]);
        logv.push_back(std::log(values[i]));
    }
    if (t.size() < 2) return std::nullopt;

    double mt = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        ml += logv[i];
    }
    mt /= static_cast<double>(t.size());
    ml /= static_cast<double>(t.size());
    double stl = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stl += (t[i] - mt) * (logv[i] - ml);
        stt += (t[i] - mt) * (t[i] - mt);
    }
    if (stt == 0.0) return std::nullopt;
    return -stl / stt;
}

SyncVerdict classify_sync(const Trajectory& traj, const ModelParams& params,
                          double eps_sync, double tail_fraction) {
    require(!traj.states.empty(), "trajectory is empty");
    require(tail_fraction > 0.0 && tail_fraction <= 1.0, "tail_fraction in (0,1]");
    const DerivedConstants k = derived_constants(params);
    const std::size_t m = traj.states.size();

    std::vector<double> d(m), gap2(m), energy(m);
    for (std::size_t i = 0; i < m; ++i) {
        d[i] = difference_energy(traj.states[i]);
        const double g = boundary_gap(traj.states[i]);
        gap2[i] = g * g;
        energy[i] = plain_energy(traj.states[i]);
    }

    SyncVerdict verdict;
    // a run that blew up never counts as synchronized, even if the recorded
    // prefix kept the cells equal (symmetric divergence)
    verdict.synchronized = !traj.failed() && d.back() <= eps_sync;
    for (std::size_t i = 0; i < m; ++i) {
        if (d[i] <= eps_sync) {
            verdict.t_sync = traj.times[i];
            break;
        }
    }

    std::size_t tail_count =
        static_cast<std::size_t>(std::llround(tail_fraction * static_cast<double>(m)));
    tail_count = std::clamp<std::size_t>(tail_count, 1, m);
    const std::size_t tail_start = m - tail_count;
    double min_gap2 = gap2[tail_start];
    for (std::size_t i = tail_start; i < m; ++i) min_gap2 = std::min(min_gap2, gap2[i]);
    verdict.tail_min_gap_sq = min_gap2;
    verdict.threshold_satisfied_tail = min_gap2 > k.sync_threshold;

    if (verdict.t_sync) {
        const double t_from = *verdict.t_sync / 2.0;
        const double t_to = traj.final_time();
        verdict.fitted_rate = fit_decay_rate(traj.times, d, t_from, t_to);
        if (verdict.fitted_rate) {
            const double gap_level =
                (params.delta + k.gamma + std::fabs(params.c - params.b) + params.p) *
                k.q;
            bool premises_throughout = true;
            for (std::size_t i = 0; i < m; ++i) {
                if (traj.times[i] < t_from || traj.times[i] > t_to) continue;
                if (!(energy[i] < k.q && params.p * gap2[i] > gap_level)) {
                    premises_throughout = false;
                    break;
                }
            }
            if (premises_throughout)
                verdict.rate_meets_delta = *verdict.fitted_rate >= 0.8 * params.delta;
        }
    }
    return verdict;
}

}  // namespace fhn
