#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fhn/diagnostics.hpp"
#include "fhn/integrator.hpp"
#include "fhn/sweep.hpp"

namespace fhn {

// %.{precision}g; 17 significant digits round-trip any finite double.
std::string format_double(double v, int precision = 17);

// t,x_1..x_n,y_1..y_n. A failed trajectory gets a '#' footer naming the
// failure and time.
void write_state_csv(std::ostream& out, const Trajectory& traj, int precision = 17);

// t,E_plain,E_weighted,D,gap,bound (same footer rule).
void write_diag_csv(std::ostream& out, const Trajectory& traj,
                    const DiagnosticsSeries& series, int precision = 17);

// p,a,alpha,n,seed,synchronized,t_sync,fitted_rate,tail_min_gap_sq,
// threshold_satisfied,bound_violations,failed. Wall time is intentionally
// not emitted; the file is a pure function of the grid.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records,
                     int precision = 17);

}  // namespace fhn
