#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Ring lattice of FitzHugh-Nagumo cells with periodic coupling and a
// boundary feedback control acting on the two endpoint cells:
//
//   dx_i/dt = a (x_{i-1} - 2 x_i + x_{i+1}) + f(x_i) - b y_i + p u_i
//   dy_i/dt = c x_i - delta y_i
//
// with x_0 = x_n, x_{n+1} = x_1, f(s) = s (s - alpha) (1 - s), and
// u_1 = x_n - x_1, u_n = x_1 - x_n, u_i = 0 otherwise.

namespace fhn {

struct CubicNonlinearity {
    explicit CubicNonlinearity(double alpha);
    double alpha;
};

// Envelope constants (lambda, beta, gamma) bounding a nonlinearity via
//   f(s) s <= -lambda s^4 + beta   and   f'(s) <= gamma.
struct AssumptionEnvelope {
    AssumptionEnvelope(double lambda, double beta, double gamma);
    double lambda;
    double beta;
    double gamma;
};

struct ModelParams {
    ModelParams(int n, double a, double b, double c, double delta, double p,
                CubicNonlinearity nonlinearity);
    int n;             // cell count, >= 4
    double a;          // coupling strength
    double b;          // recovery feedback gain
    double c;          // recovery drive gain
    double delta;      // recovery decay rate
    double p;          // boundary feedback gain
    CubicNonlinearity nonlinearity;
};

struct NetworkState {
    NetworkState(std::vector<double> x, std::vector<double> y);
    static NetworkState zero(int n);
    static NetworkState constant(int n, double x_value, double y_value);
    static NetworkState from_flat(std::span<const double> flat);

    std::size_t size() const { return x.size(); }
    std::vector<double> to_flat() const;  // [x_1..x_n, y_1..y_n]
    double norm_sq() const;

    std::vector<double> x;
    std::vector<double> y;
};

// Closed-form constants of the energy estimates.
struct DerivedConstants {
    double lambda;
    double beta;
    double gamma;
    double c1;              // weight of |x|^2 in the composite energy, delta/(2b)
    double c2;              // completed-square constant
    double q;               // absorbing-ball radius in squared-norm units
    double sync_threshold;  // squared-gap level (1 + (delta+gamma+|c-b|)/p) * q
};

double f_eval(double s, const CubicNonlinearity& nl);
double f_prime(double s, const CubicNonlinearity& nl);

// (lambda, beta, gamma) = (1/2, 8(alpha+1)^4, 1+alpha+alpha^2) works for the
// cubic family; verified by the sampling check below.
AssumptionEnvelope envelope_for_cubic(const CubicNonlinearity& nl);

struct EnvelopeViolation {
    double s;
    bool quartic_bound_failed;     // f(s) s > -lambda s^4 + beta
    bool derivative_bound_failed;  // f'(s) > gamma
};

// Samples both envelope inequalities on a uniform grid over [s_min, s_max].
// The raw overload accepts nonnegative (lambda, beta, gamma) so deliberately
// broken envelopes can be falsified; the typed one requires a valid envelope.
std::vector<EnvelopeViolation> verify_envelope(const CubicNonlinearity& nl,
                                               double lambda, double beta, double gamma,
                                               double s_min, double s_max, int samples);
std::vector<EnvelopeViolation> verify_envelope(const CubicNonlinearity& nl,
                                               const AssumptionEnvelope& env,
                                               double s_min, double s_max, int samples);

// Second difference on the ring, coupling constant NOT applied.
std::vector<double> laplacian_periodic(std::span<const double> x);

// u_1 = x_n - x_1, u_n = x_1 - x_n, interior entries exactly zero.
std::vector<double> feedback_controls(std::span<const double> x);

// Right-hand side on the flat layout [x_1..x_n, y_1..y_n]; preallocated out.
void rhs_flat(const ModelParams& params, std::span<const double> state,
              std::span<double> out);
NetworkState rhs(const NetworkState& state, const ModelParams& params);

// |<laplacian(x), x> + sum_i (x_i - x_{i-1})^2| with x_0 = x_n; zero in
// exact arithmetic for every x.
double divergence_residual(std::span<const double> x);

DerivedConstants derived_constants(const ModelParams& params);
DerivedConstants derived_constants(const ModelParams& params,
                                   const AssumptionEnvelope& env);

// T_B = log+(rho * max{C1,1}) / delta: entry time into the absorbing ball
// for initial data with squared norm <= rho.
double absorbing_entry_time(double rho, const ModelParams& params);

}  // namespace fhn
