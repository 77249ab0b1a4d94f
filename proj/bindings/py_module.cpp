#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fhn/diagnostics.hpp"
#include "fhn/integrator.hpp"
#include "fhn/model.hpp"
#include "fhn/sweep.hpp"

namespace py = pybind11;
using namespace fhn;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Boundary-feedback FitzHugh-Nagumo ring lattice laboratory";

    py::class_<CubicNonlinearity>(m, "CubicNonlinearity")
        .def(py::init<double>(), py::arg("alpha"))
        .def_readonly("alpha", &CubicNonlinearity::alpha);

    py::class_<AssumptionEnvelope>(m, "AssumptionEnvelope")
        .def(py::init<double, double, double>(), py::arg("lambda_"), py::arg("beta"),
             py::arg("gamma"))
        .def_readonly("lambda_", &AssumptionEnvelope::lambda)
        .def_readonly("beta", &AssumptionEnvelope::beta)
        .def_readonly("gamma", &AssumptionEnvelope::gamma);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](int n, double a, double b, double c, double delta, double p,
                         double alpha) {
                 return ModelParams(n, a, b, c, delta, p, CubicNonlinearity(alpha));
             }),
             py::arg("n") = 4, py::arg("a") = 1.0, py::arg("b") = 1.0,
             py::arg("c") = 0.1, py::arg("delta") = 0.2, py::arg("p") = 1.0,
             py::arg("alpha") = 0.5)
        .def_readonly("n", &ModelParams::n)
        .def_readonly("a", &ModelParams::a)
        .def_readonly("b", &ModelParams::b)
        .def_readonly("c", &ModelParams::c)
        .def_readonly("delta", &ModelParams::delta)
        .def_readonly("p", &ModelParams::p)
        .def_readonly("nonlinearity", &ModelParams::nonlinearity);

    py::class_<NetworkState>(m, "NetworkState")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("x"),
             py::arg("y"))
        .def_static("zero", &NetworkState::zero, py::arg("n"))
        .def_static("constant", &NetworkState::constant, py::arg("n"),
                    py::arg("x_value"), py::arg("y_value"))
        .def("to_flat", &NetworkState::to_flat)
        .def("norm_sq", &NetworkState::norm_sq)
        .def("__len__", &NetworkState::size)
        .def_readonly("x", &NetworkState::x)
        .def_readonly("y", &NetworkState::y);

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def_readonly("lambda_", &DerivedConstants::lambda)
        .def_readonly("beta", &DerivedConstants::beta)
        .def_readonly("gamma", &DerivedConstants::gamma)
        .def_readonly("c1", &DerivedConstants::c1)
        .def_readonly("c2", &DerivedConstants::c2)
        .def_readonly("q", &DerivedConstants::q)
        .def_readonly("sync_threshold", &DerivedConstants::sync_threshold)
        .def("__repr__", [](const DerivedConstants& k) {
            std::ostringstream s;
            s << "DerivedConstants(lambda=" << k.lambda << ", beta=" << k.beta
              << ", gamma=" << k.gamma << ", c1=" << k.c1 << ", c2=" << k.c2
              << ", q=" << k.q << ", sync_threshold=" << k.sync_threshold << ")";
            return s.str();
        });

    py::class_<EnvelopeViolation>(m, "EnvelopeViolation")
        .def_readonly("s", &EnvelopeViolation::s)
        .def_readonly("quartic_bound_failed", &EnvelopeViolation::quartic_bound_failed)
        .def_readonly("derivative_bound_failed",
                      &EnvelopeViolation::derivative_bound_failed);

    m.def("f_eval", &f_eval, py::arg("s"), py::arg("nl"));
    m.def("f_prime", &f_prime, py::arg("s"), py::arg("nl"));
    m.def("envelope_for_cubic", &envelope_for_cubic, py::arg("nl"));
    m.def(
        "verify_envelope",
        [](const CubicNonlinearity& nl, const AssumptionEnvelope& env, double s_min,
           double s_max, int samples) {
            return verify_envelope(nl, env, s_min, s_max, samples);
        },
        py::arg("nl"), py::arg("env"), py::arg("s_min") = -20.0,
        py::arg("s_max") = 20.0, py::arg("samples") = 100000);
    m.def(
        "laplacian_periodic",
        [](const std::vector<double>& x) { return laplacian_periodic(x); },
        py::arg("x"));
    m.def(
        "feedback_controls",
        [](const std::vector<double>& x) { return feedback_controls(x); },
        py::arg("x"));
    m.def("rhs", &rhs, py::arg("state"), py::arg("params"));
    m.def(
        "divergence_residual",
        [](const std::vector<double>& x) { return divergence_residual(x); },
        py::arg("x"));
    m.def(
        "derived_constants",
        [](const ModelParams& p) { return derived_constants(p); },
        py::arg("params"));
    m.def("absorbing_entry_time", &absorbing_entry_time, py::arg("rho"),
          py::arg("params"));

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<double, double, int, double, double, double, double>(),
             py::arg("dt") = 1e-3, py::arg("t_end") = 200.0,
             py::arg("sample_stride") = 10, py::arg("rtol") = 1e-6,
             py::arg("atol") = 1e-9, py::arg("dt_min") = 1e-10,
             py::arg("dt_max") = 1.0)
        .def_readonly("dt", &IntegratorConfig::dt)
        .def_readonly("t_end", &IntegratorConfig::t_end)
        .def_readonly("sample_stride", &IntegratorConfig::sample_stride)
        .def_readonly("rtol", &IntegratorConfig::rtol)
        .def_readonly("atol", &IntegratorConfig::atol)
        .def_readonly("dt_min", &IntegratorConfig::dt_min)
        .def_readonly("dt_max", &IntegratorConfig::dt_max);

    py::enum_<IntegrationFailure>(m, "IntegrationFailure")
        .value("none", IntegrationFailure::none)
        .value("non_finite_state", IntegrationFailure::non_finite_state)
        .value("dt_min_underflow", IntegrationFailure::dt_min_underflow);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("step_count", &Trajectory::step_count)
        .def_readonly("rejected_steps", &Trajectory::rejected_steps)
        .def_readonly("failure", &Trajectory::failure)
        .def_readonly("failure_time", &Trajectory::failure_time)
        .def("failed", &Trajectory::failed)
        .def("final_state", &Trajectory::final_state)
        .def("final_time", &Trajectory::final_time);

    m.def("integrate_fixed", &integrate_fixed, py::arg("params"), py::arg("init"),
          py::arg("cfg"));
    m.def("integrate_adaptive", &integrate_adaptive, py::arg("params"), py::arg("init"),
          py::arg("cfg"));
    m.def("convergence_order", &convergence_order, py::arg("params"), py::arg("init"),
          py::arg("t_end"), py::arg("dts"));

    py::class_<DifferenceState>(m, "DifferenceState")
        .def_readonly("v", &DifferenceState::v)
        .def_readonly("w", &DifferenceState::w);

    py::class_<DiagnosticsSeries>(m, "DiagnosticsSeries")
        .def_readonly("times", &DiagnosticsSeries::times)
        .def_readonly("weighted_energy", &DiagnosticsSeries::weighted_energy)
        .def_readonly("plain_energy", &DiagnosticsSeries::plain_energy)
        .def_readonly("diff_energy", &DiagnosticsSeries::diff_energy)
        .def_readonly("gap", &DiagnosticsSeries::gap)
        .def_readonly("bound", &DiagnosticsSeries::bound);

    py::class_<SyncVerdict>(m, "SyncVerdict")
        .def_readonly("synchronized", &SyncVerdict::synchronized)
        .def_readonly("t_sync", &SyncVerdict::t_sync)
        .def_readonly("fitted_rate", &SyncVerdict::fitted_rate)
        .def_readonly("threshold_satisfied_tail", &SyncVerdict::threshold_satisfied_tail)
        .def_readonly("tail_min_gap_sq", &SyncVerdict::tail_min_gap_sq)
        .def_readonly("rate_meets_delta", &SyncVerdict::rate_meets_delta);

    py::class_<BoundViolation>(m, "BoundViolation")
        .def_readonly("time", &BoundViolation::time)
        .def_readonly("energy", &BoundViolation::energy)
        .def_readonly("bound", &BoundViolation::bound);

    py::class_<SyncInequalityReport>(m, "SyncInequalityReport")
        .def_readonly("failure_times", &SyncInequalityReport::failure_times)
        .def_readonly("premises_ever_active",
                      &SyncInequalityReport::premises_ever_active)
        .def_readonly("checked_points", &SyncInequalityReport::checked_points);

    m.def("weighted_energy", &weighted_energy, py::arg("state"), py::arg("c1"));
    m.def("plain_energy", &plain_energy, py::arg("state"));
    m.def("dissipative_bound", &dissipative_bound, py::arg("t"), py::arg("ew0"),
          py::arg("params"));
    m.def("difference_state", &difference_state, py::arg("state"));
    m.def("difference_energy", &difference_energy, py::arg("state"));
    m.def("boundary_gap", &boundary_gap, py::arg("state"));
    m.def("feedback_sum_identity_residual", &feedback_sum_identity_residual,
          py::arg("state"), py::arg("p"));
    m.def("build_series", &build_series, py::arg("traj"), py::arg("params"));
    m.def("check_dissipative_bound", &check_dissipative_bound, py::arg("traj"),
          py::arg("params"), py::arg("tol"));
    m.def("check_sync_inequality", &check_sync_inequality, py::arg("traj"),
          py::arg("params"), py::arg("slack"));
    m.def("fit_decay_rate", &fit_decay_rate, py::arg("times"), py::arg("values"),
          py::arg("t_from"), py::arg("t_to"));
    m.def("classify_sync", &classify_sync, py::arg("traj"), py::arg("params"),
          py::arg("eps_sync") = 1e-8, py::arg("tail_fraction") = 0.25);

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>,
                      std::vector<int>, std::vector<std::uint64_t>, ModelParams, double,
                      IntegratorConfig>(),
             py::arg("p_values"), py::arg("a_values"), py::arg("alpha_values"),
             py::arg("n_values"), py::arg("seeds"), py::arg("base"),
             py::arg("init_radius"), py::arg("integ"))
        .def("__len__", &SweepGrid::size);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("params", &SweepRecord::params)
        .def_readonly("seed", &SweepRecord::seed)
        .def_readonly("verdict", &SweepRecord::verdict)
        .def_readonly("bound_violations", &SweepRecord::bound_violations)
        .def_readonly("max_plain_energy", &SweepRecord::max_plain_energy)
        .def_readonly("wall_time_seconds", &SweepRecord::wall_time_seconds)
        .def_readonly("failed", &SweepRecord::failed);

    m.def("random_initial", &random_initial, py::arg("n"), py::arg("radius"),
          py::arg("seed"));
    m.def("random_initial_generator_id", &random_initial_generator_id);
    m.def("run_case", &run_case, py::arg("params"), py::arg("init"), py::arg("cfg"),
          py::arg("seed") = 0);
    m.def("run_sweep", &run_sweep, py::arg("grid"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
}
