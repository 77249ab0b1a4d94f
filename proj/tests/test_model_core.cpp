#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fhn/model.hpp"

using namespace fhn;

namespace {
ModelParams baseline(double p = 1.0) {
    return ModelParams(4, 1.0, 1.0, 0.1, 0.2, p, CubicNonlinearity(0.5));
}
}  // namespace

TEST_CASE("cubic nonlinearity values and roots") {
    const CubicNonlinearity nl(0.5);
    CHECK(f_eval(0.0, nl) == 0.0);
    CHECK(f_eval(0.5, nl) == 0.0);
    CHECK(f_eval(1.0, nl) == 0.0);
    CHECK(f_eval(2.0, nl) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(f_prime(0.0, nl) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(f_prime(1.0, nl) == doctest::Approx(-0.5).epsilon(1e-15));
    // interior maximum of f' at s = (alpha+1)/3
    CHECK(f_prime(0.5, nl) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(CubicNonlinearity(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CubicNonlinearity(1.0), std::invalid_argument);
    CHECK_THROWS_AS(CubicNonlinearity(1.5), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(3, 1, 1, 0.1, 0.2, 1, CubicNonlinearity(0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(4, -1, 1, 0.1, 0.2, 1, CubicNonlinearity(0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(4, 1, 1, 0.1, 0.0, 1, CubicNonlinearity(0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(AssumptionEnvelope(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(baseline());
}

TEST_CASE("envelope constants for the cubic family") {
    const AssumptionEnvelope e1 = envelope_for_cubic(CubicNonlinearity(0.5));
    CHECK(e1.lambda == 0.5);
    CHECK(e1.beta == doctest::Approx(40.5).epsilon(1e-15));
    CHECK(e1.gamma == doctest::Approx(1.75).epsilon(1e-15));

    const AssumptionEnvelope e2 = envelope_for_cubic(CubicNonlinearity(0.25));
    CHECK(e2.beta == doctest::Approx(19.53125).epsilon(1e-15));
    CHECK(e2.gamma == doctest::Approx(1.3125).epsilon(1e-15));

    // small-alpha limit: beta -> 8, gamma -> 1
    const AssumptionEnvelope e3 = envelope_for_cubic(CubicNonlinearity(1e-8));
    CHECK(e3.beta == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(e3.gamma == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("envelope verification accepts the cubic bounds") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
    for (int k = 0; k < 25; ++k) {
        const CubicNonlinearity nl(dist(rng));
        const auto violations =
            verify_envelope(nl, envelope_for_cubic(nl), -20.0, 20.0, 20000);
        CHECK(violations.empty());
    }
}

TEST_CASE("envelope verification falsifies broken bounds") {
    const CubicNonlinearity nl(0.5);

    SUBCASE("gamma too small") {
        const auto violations = verify_envelope(nl, 0.5, 40.5, 0.0, -20.0, 20.0, 20000);
        REQUIRE(!violations.empty());
        const EnvelopeViolation& v = violations.front();
        CHECK(v.derivative_bound_failed);
        CHECK(f_prime(v.s, nl) > 0.0);
    }
    SUBCASE("beta too small") {
        const auto violations = verify_envelope(nl, 0.5, 0.0, 1.75, -20.0, 20.0, 20000);
        REQUIRE(!violations.empty());
        CHECK(violations.front().quartic_bound_failed);
    }
    SUBCASE("lambda too large") {
        // f(s)s ~ -s^4 asymptotically, so lambda=2 must fail for large |s|
        const auto violations = verify_envelope(nl, 2.0, 40.5, 1.75, -20.0, 20.0, 20000);
        CHECK(!violations.empty());
    }
}

TEST_CASE("periodic laplacian") {
    const std::vector<double> e1{1.0, 0.0, 0.0, 0.0};
    CHECK(laplacian_periodic(e1) == std::vector<double>{-2.0, 1.0, 0.0, 1.0});

    const std::vector<double> flat{2.5, 2.5, 2.5, 2.5, 2.5};
    CHECK(laplacian_periodic(flat) == std::vector<double>(5, 0.0));

    // alternating vector on an even ring is a -4 eigenvector
    const std::vector<double> alt{1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
    CHECK(laplacian_periodic(alt) ==
          std::vector<double>{-4.0, 4.0, -4.0, 4.0, -4.0, 4.0});
}

TEST_CASE("boundary feedback controls") {
    const std::vector<double> x{1.0, 0.0, 0.0, 4.0};
    const std::vector<double> u = feedback_controls(x);
    CHECK(u == std::vector<double>{3.0, 0.0, 0.0, -3.0});

    const std::vector<double> sync{0.7, 0.7, 0.7, 0.7, 0.7};
    CHECK(feedback_controls(sync) == std::vector<double>(5, 0.0));
}

TEST_CASE("network right-hand side on a hand case") {
    const ModelParams params = baseline();
    const NetworkState state({1.0, 0.0, 0.0, 4.0}, {0.0, 0.0, 0.0, 0.0});
    const NetworkState d = rhs(state, params);
    CHECK(d.x[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(d.x[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.x[2] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(d.x[3] == doctest::Approx(-52.0).epsilon(1e-15));
    CHECK(d.y[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(d.y[1] == 0.0);
    CHECK(d.y[2] == 0.0);
    CHECK(d.y[3] == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("rhs matches a direct per-cell evaluation on a larger ring") {
    const ModelParams params(6, 1.7, 0.9, 0.05, 0.3, 2.5, CubicNonlinearity(0.35));
    const NetworkState s({0.4, -1.1, 2.0, 0.0, -0.6, 1.3},
                         {0.2, 0.0, -0.8, 1.5, -0.3, 0.7});
    const NetworkState d = rhs(s, params);
    for (int i = 0; i < 6; ++i) {
        const double prev = s.x[(i + 5) % 6];
        const double next = s.x[(i + 1) % 6];
        const double f = s.x[i] * (s.x[i] - 0.35) * (1.0 - s.x[i]);
        const double u = i == 0 ? s.x[5] - s.x[0] : (i == 5 ? s.x[0] - s.x[5] : 0.0);
        CHECK(d.x[i] == doctest::Approx(1.7 * (prev - 2.0 * s.x[i] + next) + f -
                                        0.9 * s.y[i] + 2.5 * u)
                            .epsilon(1e-14));
        CHECK(d.y[i] == doctest::Approx(0.05 * s.x[i] - 0.3 * s.y[i]).epsilon(1e-14));
    }
}

TEST_CASE("rhs preserves per-cell symmetry bitwise") {
    const ModelParams params = baseline();
    const NetworkState state = NetworkState::constant(4, 0.37, -1.2);
    const NetworkState d = rhs(state, params);
    for (int i = 1; i < 4; ++i) {
        CHECK(d.x[i] == d.x[0]);
        CHECK(d.y[i] == d.y[0]);
    }
}

TEST_CASE("zero state is an equilibrium") {
    const NetworkState d = rhs(NetworkState::zero(6),
                               ModelParams(6, 2, 1, 0.1, 0.2, 3, CubicNonlinearity(0.3)));
    CHECK(d.norm_sq() == 0.0);
}

TEST_CASE("divergence identity on random vectors") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int k = 0; k < 2000; ++k) {
        const int n = 4 + k % 61;
        std::vector<double> x(n);
        double norm_sq = 0.0;
        for (double& v : x) {
            v = dist(rng);
            norm_sq += v * v;
        }
        CHECK(divergence_residual(x) < 1e-12 * (1.0 + norm_sq));
    }
}

TEST_CASE("divergence identity on a hand case") {
    // <lap x, x> = -26, sum of squared ring differences = 26
    CHECK(divergence_residual(std::vector<double>{1.0, 0.0, 0.0, 4.0}) == 0.0);
}

TEST_CASE("state flat layout round-trip") {
    const NetworkState s({1.0, 2.0, 3.0, 4.0}, {-1.0, -2.0, -3.0, -4.0});
    const std::vector<double> flat = s.to_flat();
    REQUIRE(flat.size() == 8);
    CHECK(flat[0] == 1.0);
    CHECK(flat[4] == -1.0);
    const NetworkState back = NetworkState::from_flat(flat);
    CHECK(back.x == s.x);
    CHECK(back.y == s.y);
    CHECK(s.norm_sq() == doctest::Approx(60.0).epsilon(1e-15));
}

TEST_CASE("derived constants at the reference point") {
    const DerivedConstants k = derived_constants(baseline(10.0));
    CHECK(k.c1 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(k.c2 == doctest::Approx(0.121).epsilon(1e-12));
    CHECK(k.q == doctest::Approx(1654.2).epsilon(1e-12));
    CHECK(k.sync_threshold == doctest::Approx(2125.647).epsilon(1e-12));
    CHECK(k.lambda == 0.5);
    CHECK(k.beta == doctest::Approx(40.5).epsilon(1e-12));
    CHECK(k.gamma == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("sync threshold decreases toward q as p grows") {
    const DerivedConstants k1 = derived_constants(baseline(10.0));
    const DerivedConstants k2 = derived_constants(baseline(20.0));
    CHECK(k2.sync_threshold < k1.sync_threshold);
    CHECK(k2.sync_threshold > k2.q);
}

TEST_CASE("constants scale with n through the source term") {
    const ModelParams p4 = baseline(10.0);
    const ModelParams p8(8, 1.0, 1.0, 0.1, 0.2, 10.0, CubicNonlinearity(0.5));
    const DerivedConstants k4 = derived_constants(p4);
    const DerivedConstants k8 = derived_constants(p8);
    // q - 1/min{c1,1} is proportional to n
    const double scale = 1.0 / std::min(k4.c1, 1.0);
    CHECK((k8.q - scale) == doctest::Approx(2.0 * (k4.q - scale)).epsilon(1e-12));
}

TEST_CASE("custom envelope flows into the constants") {
    const ModelParams params = baseline(10.0);
    const DerivedConstants via_default = derived_constants(params);
    const DerivedConstants via_env =
        derived_constants(params, envelope_for_cubic(params.nonlinearity));
    CHECK(via_default.q == via_env.q);
    CHECK(via_default.sync_threshold == via_env.sync_threshold);

    // doubling beta raises only the source-driven terms
    const DerivedConstants bigger =
        derived_constants(params, AssumptionEnvelope(0.5, 81.0, 1.75));
    CHECK(bigger.q > via_default.q);
    CHECK(bigger.c2 == via_default.c2);
}

TEST_CASE("absorbing ball entry time") {
    const ModelParams params = baseline(10.0);
    CHECK(absorbing_entry_time(100.0, params) ==
          doctest::Approx(std::log(100.0) / 0.2).epsilon(1e-14));
    // log+ truncates at zero once rho*max{c1,1} <= 1
    CHECK(absorbing_entry_time(0.5, params) == 0.0);
    CHECK(absorbing_entry_time(1.0, params) == 0.0);
}
