#include "fhn/csv.hpp"

#include <cmath>
#include <cstdio>

namespace fhn {

namespace {

const char* bool_str(bool b) { return b ? "true" : "false"; }

std::string optional_str(const std::optional<double>& v, int precision) {
    return v ? format_double(*v, precision) : "nan";
}

void write_failure_footer(std::ostream& out, const Trajectory& traj) {
    if (!traj.failed()) return;
    const char* reason = traj.failure == IntegrationFailure::non_finite_state
                             ? "non-finite state"
                             : "step rejected at dt_min";
    out << "# integration failed at t=" << format_double(traj.failure_time) << " ("
        << reason << ")\n";
}

}  // namespace

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

void write_state_csv(std::ostream& out, const Trajectory& traj, int precision) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",y_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out << format_double(traj.times[k], precision);
        for (double v : traj.states[k].x) out << ',' << format_double(v, precision);
        for (double v : traj.states[k].y) out << ',' << format_double(v, precision);
        out << "\n";
    }
    write_failure_footer(out, traj);
}

void write_diag_csv(std::ostream& out, const Trajectory& traj,
                    const DiagnosticsSeries& series, int precision) {
    out << "t,E_plain,E_weighted,D,gap,bound\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_double(series.times[k], precision) << ','
            << format_double(series.plain_energy[k], precision) << ','
            << format_double(series.weighted_energy[k], precision) << ','
            << format_double(series.diff_energy[k], precision) << ','
            << format_double(series.gap[k], precision) << ','
            << format_double(series.bound[k], precision) << "\n";
    }
    write_failure_footer(out, traj);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records,
                     int precision) {
    out << "# generator: " << random_initial_generator_id() << "\n";
    out << "p,a,alpha,n,seed,synchronized,t_sync,fitted_rate,tail_min_gap_sq,"
           "threshold_satisfied,bound_violations,failed\n";
    for (const SweepRecord& r : records) {
        out << format_double(r.params.p, precision) << ','
            << format_double(r.params.a, precision) << ','
            << format_double(r.params.nonlinearity.alpha, precision) << ','
            << r.params.n << ',' << r.seed << ','
            << bool_str(r.verdict.synchronized) << ','
            << optional_str(r.verdict.t_sync, precision) << ','
            << optional_str(r.verdict.fitted_rate, precision) << ','
            << format_double(r.verdict.tail_min_gap_sq, precision) << ','
            << bool_str(r.verdict.threshold_satisfied_tail) << ','
            << r.bound_violations << ',' << bool_str(r.failed) << "\n";
    }
}

}  // namespace fhn
