#include "fhn/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace fhn {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

constexpr double kBoundCheckTol = 1e-6;

}  // namespace

SweepGrid::SweepGrid(std::vector<double> p_values_, std::vector<double> a_values_,
                     std::vector<double> alpha_values_, std::vector<int> n_values_,
                     std::vector<std::uint64_t> seeds_, ModelParams base_,
                     double init_radius_, IntegratorConfig integ_)
    : p_values(std::move(p_values_)), a_values(std::move(a_values_)),
      alpha_values(std::move(alpha_values_)), n_values(std::move(n_values_)),
      seeds(std::move(seeds_)), base(base_), init_radius(init_radius_),
      integ(integ_) {
    require(!p_values.empty() && !a_values.empty() && !alpha_values.empty() &&
                !n_values.empty() && !seeds.empty(),
            "all sweep lists must be nonempty");
    for (double v : p_values) require(std::isfinite(v) && v > 0.0, "p values must be > 0");
    for (double v : a_values) require(std::isfinite(v) && v > 0.0, "a values must be > 0");
    for (double v : alpha_values)
        require(std::isfinite(v) && v > 0.0 && v < 1.0, "alpha values must be in (0,1)");
    for (int v : n_values) require(v >= 4, "n values must be >= 4");
    require(std::isfinite(init_radius) && init_radius > 0.0, "init_radius must be > 0");
}

std::size_t SweepGrid::size() const {
    return p_values.size() * a_values.size() * alpha_values.size() * n_values.size() *
           seeds.size();
}

NetworkState random_initial(int n, double radius, std::uint64_t seed) {
    require(n >= 4, "n must be >= 4");
    require(std::isfinite(radius) && radius > 0.0, "radius must be > 0");
    std::mt19937_64 rng(seed);
    auto draw = [&rng, radius]() {
        // top 53 bits -> [0,1); the distribution classes are not portable
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return radius * (2.0 * u - 1.0);
    };
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = draw();
    for (int i = 0; i < n; ++i) y[i] = draw();
    return NetworkState(std::move(x), std::move(y));
}

const char* random_initial_generator_id() {
    return "mt19937_64/top53-uniform";
}

SweepRecord run_case(const ModelParams& params, const NetworkState& init,
                     const IntegratorConfig& cfg, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Trajectory traj = integrate_fixed(params, init, cfg);

    SweepRecord record{params, seed, {}, 0, 0.0, 0.0, traj.failed()};
    record.bound_violations =
        static_cast<long>(check_dissipative_bound(traj, params, kBoundCheckTol).size());
    record.verdict = classify_sync(traj, params);
    for (const NetworkState& st : traj.states)
        record.max_plain_energy = std::max(record.max_plain_energy, plain_energy(st));

    record.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::vector<SweepRecord> run_sweep(const SweepGrid& grid, int workers) {
    require(workers >= 1, "workers must be >= 1");

    struct Case {
        double p, a, alpha;
        int n;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.reserve(grid.size());
    for (double p : grid.p_values)
        for (double a : grid.a_values)
            for (double alpha : grid.alpha_values)
                for (int n : grid.n_values)
                    for (std::uint64_t seed : grid.seeds)
                        cases.push_back({p, a, alpha, n, seed});

    std::vector<SweepRecord> records;
    records.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Case& c = cases[i];
        ModelParams params(c.n, c.a, grid.base.b, grid.base.c, grid.base.delta, c.p,
                           CubicNonlinearity(c.alpha));
        records.push_back(SweepRecord{params, c.seed, {}, 0, 0.0, 0.0, false});
    }

    auto work = [&](std::size_t i) {
        const Case& c = cases[i];
        const NetworkState init = random_initial(c.n, grid.init_radius, c.seed);
        records[i] = run_case(records[i].params, init, grid.integ, c.seed);
    };

    if (workers == 1 || cases.size() <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) work(i);
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker_loop = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) return;
            work(i);
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), cases.size()));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker_loop);
    for (auto& th : pool) th.join();
    return records;
}

}  // namespace fhn
