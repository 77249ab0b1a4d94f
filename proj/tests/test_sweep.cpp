#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fhn/csv.hpp"
#include "fhn/sweep.hpp"

using namespace fhn;

namespace {
ModelParams baseline(double p = 1.0) {
    return ModelParams(4, 1.0, 1.0, 0.1, 0.2, p, CubicNonlinearity(0.5));
}

SweepGrid small_grid() {
    return SweepGrid({0.5, 1.0}, {1.0}, {0.5}, {4}, {0, 1, 2}, baseline(), 2.0,
                     IntegratorConfig(1e-3, 5.0, 10));
}

std::string csv_of(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    write_sweep_csv(out, records);
    return out.str();
}
}  // namespace

TEST_CASE("random initial states are reproducible and bounded") {
    const NetworkState a = random_initial(6, 2.5, 42);
    const NetworkState b = random_initial(6, 2.5, 42);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);

    const NetworkState c = random_initial(6, 2.5, 43);
    CHECK(a.x != c.x);

    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(a.x[i]) <= 2.5);
        CHECK(std::abs(a.y[i]) <= 2.5);
    }
    CHECK(a.norm_sq() <= 12 * 2.5 * 2.5);
    CHECK(std::strcmp(random_initial_generator_id(), "mt19937_64/top53-uniform") == 0);

    const NetworkState tiny = random_initial(4, 1e-12, 1);
    CHECK(tiny.norm_sq() > 0.0);
    CHECK(tiny.norm_sq() <= 8e-24);
}

TEST_CASE("random initial components are centered") {
    // grand mean over 1e5 draws; each component is uniform on [-r, r] with
    // variance r^2/3, so the mean of 8e5 components has sigma = r/sqrt(3*8e5)
    const double radius = 2.0;
    const int draws = 100000;
    double sum = 0.0;
    for (int s = 0; s < draws; ++s) {
        const NetworkState st = random_initial(4, radius, static_cast<std::uint64_t>(s));
        for (double v : st.x) sum += v;
        for (double v : st.y) sum += v;
    }
    const double count = 8.0 * draws;
    const double sigma = radius / std::sqrt(3.0 * count);
    CHECK(std::abs(sum / count) < 3.0 * sigma);
}

TEST_CASE("run_case on the zero state") {
    const SweepRecord rec =
        run_case(baseline(), NetworkState::zero(4), IntegratorConfig(1e-3, 2.0), 99);
    CHECK(!rec.failed);
    CHECK(rec.seed == 99);
    CHECK(rec.bound_violations == 0);
    CHECK(rec.max_plain_energy == 0.0);
    CHECK(rec.verdict.synchronized);
    REQUIRE(rec.verdict.t_sync.has_value());
    CHECK(*rec.verdict.t_sync == 0.0);
    CHECK(rec.wall_time_seconds > 0.0);
}

TEST_CASE("run_case keeps the bound over the full baseline horizon") {
    const SweepRecord rec = run_case(baseline(), random_initial(4, 2.0, 3),
                                     IntegratorConfig(1e-3, 200.0, 10), 3);
    CHECK(!rec.failed);
    CHECK(rec.bound_violations == 0);
    CHECK(rec.max_plain_energy > 0.0);
}

TEST_CASE("run_case flags integration failure") {
    const SweepRecord rec = run_case(baseline(), NetworkState::constant(4, 1e3, 0.0),
                                     IntegratorConfig(0.5, 5.0), 0);
    CHECK(rec.failed);
}

TEST_CASE("grid size and lexicographic case order") {
    const SweepGrid grid = small_grid();
    REQUIRE(grid.size() == 6);
    const std::vector<SweepRecord> records = run_sweep(grid, 1);
    REQUIRE(records.size() == 6);

    // seed varies fastest, p slowest
    CHECK(records[0].params.p == 0.5);
    CHECK(records[0].seed == 0);
    CHECK(records[1].seed == 1);
    CHECK(records[2].seed == 2);
    CHECK(records[3].params.p == 1.0);
    CHECK(records[3].seed == 0);
}

TEST_CASE("a singleton grid reproduces a direct run_case") {
    const IntegratorConfig cfg(1e-3, 5.0, 10);
    const SweepGrid grid({1.0}, {1.0}, {0.5}, {4}, {7}, baseline(), 2.0, cfg);
    REQUIRE(grid.size() == 1);
    const std::vector<SweepRecord> records = run_sweep(grid, 1);
    REQUIRE(records.size() == 1);

    const SweepRecord direct = run_case(baseline(), random_initial(4, 2.0, 7), cfg, 7);
    const SweepRecord& rec = records[0];
    CHECK(rec.seed == direct.seed);
    CHECK(rec.failed == direct.failed);
    CHECK(rec.bound_violations == direct.bound_violations);
    CHECK(rec.max_plain_energy == direct.max_plain_energy);
    CHECK(rec.verdict.synchronized == direct.verdict.synchronized);
    CHECK(rec.verdict.t_sync == direct.verdict.t_sync);
    CHECK(rec.verdict.fitted_rate == direct.verdict.fitted_rate);
    CHECK(rec.verdict.tail_min_gap_sq == direct.verdict.tail_min_gap_sq);
    CHECK(rec.verdict.threshold_satisfied_tail == direct.verdict.threshold_satisfied_tail);
}

TEST_CASE("strong coupling synchronizes every sweep case") {
    const SweepGrid grid({1.0}, {5.0}, {0.5}, {4}, {0, 1}, baseline(), 2.0,
                         IntegratorConfig(1e-3, 80.0, 10));
    const std::vector<SweepRecord> records = run_sweep(grid, 2);
    REQUIRE(records.size() == 2);
    for (const SweepRecord& rec : records) {
        CHECK(!rec.failed);
        CHECK(rec.verdict.synchronized);
        CHECK(rec.bound_violations == 0);
        // the tail flag restates the threshold comparison for this record
        const DerivedConstants k = derived_constants(rec.params);
        CHECK(rec.verdict.threshold_satisfied_tail ==
              (rec.verdict.tail_min_gap_sq > k.sync_threshold));
    }
}

TEST_CASE("sweep results are independent of the worker count") {
    const SweepGrid grid = small_grid();
    const std::vector<SweepRecord> serial = run_sweep(grid, 1);
    const std::vector<SweepRecord> parallel = run_sweep(grid, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].params.p == parallel[i].params.p);
        CHECK(serial[i].bound_violations == parallel[i].bound_violations);
        CHECK(serial[i].max_plain_energy == parallel[i].max_plain_energy);
        CHECK(serial[i].verdict.synchronized == parallel[i].verdict.synchronized);
        CHECK(serial[i].verdict.tail_min_gap_sq == parallel[i].verdict.tail_min_gap_sq);
    }
    // the serialized form (which drops wall time) must be bitwise identical
    CHECK(csv_of(serial) == csv_of(parallel));
}

TEST_CASE("oversubscribed and degenerate worker counts behave") {
    const SweepGrid grid = small_grid();
    const std::string expected = csv_of(run_sweep(grid, 1));
    CHECK(csv_of(run_sweep(grid, 16)) == expected);  // more workers than cases
    CHECK_THROWS_AS(run_sweep(grid, 0), std::invalid_argument);
}

TEST_CASE("sweep csv layout") {
    const std::vector<SweepRecord> records = run_sweep(small_grid(), 2);
    const std::string text = csv_of(records);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);

    REQUIRE(lines.size() >= 8);  // comment + header + 6 rows
    CHECK(lines[0].rfind("# generator: mt19937_64/top53-uniform", 0) == 0);
    CHECK(lines[1] ==
          "p,a,alpha,n,seed,synchronized,t_sync,fitted_rate,tail_min_gap_sq,"
          "threshold_satisfied,bound_violations,failed");
    int rows = 0;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (!lines[i].empty() && lines[i][0] != '#') ++rows;
    }
    CHECK(rows == 6);
    // no case synchronizes by t=5, so the boolean columns all read false
    CHECK(text.find("false") != std::string::npos);
    CHECK(text.find(",1,") != std::string::npos);   // numeric columns stay numeric
}

TEST_CASE("sweep csv renders booleans and absent optionals") {
    const SweepRecord hit{baseline(0.5), 7,
                          SyncVerdict{true, 1.5, 0.25, false, 2.5, std::nullopt},
                          0, 10.0, 0.01, false};
    const SweepRecord miss{baseline(), 8,
                           SyncVerdict{false, std::nullopt, std::nullopt, false, 0.0,
                                       std::nullopt},
                           3, 42.0, 0.02, true};
    const std::string text = csv_of({hit, miss});
    CHECK(text.find("0.5,1,0.5,4,7,true,1.5,0.25,2.5,false,0,false\n") !=
          std::string::npos);
    CHECK(text.find("1,1,0.5,4,8,false,nan,nan,0,false,3,true\n") !=
          std::string::npos);
}

TEST_CASE("csv doubles round-trip at precision 17") {
    const double values[] = {0.1, 1654.2, 1.0 / 3.0, 2.5e-17, -0.0, 1e308};
    for (double v : values) {
        const std::string s = format_double(v, 17);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(std::nan(""), 17) == "nan");
}

TEST_CASE("state and diagnostics csv headers") {
    const ModelParams params = baseline();
    const NetworkState init = random_initial(4, 1.0, 8);
    const Trajectory traj = integrate_fixed(params, init, IntegratorConfig(1e-2, 0.1));
    const DiagnosticsSeries series = build_series(traj, params);

    std::ostringstream s1;
    write_state_csv(s1, traj);
    std::istringstream in1(s1.str());
    std::string header;
    std::getline(in1, header);
    CHECK(header == "t,x_1,x_2,x_3,x_4,y_1,y_2,y_3,y_4");

    std::ostringstream s2;
    write_diag_csv(s2, traj, series);
    std::istringstream in2(s2.str());
    std::getline(in2, header);
    CHECK(header == "t,E_plain,E_weighted,D,gap,bound");

    // line counts: header + one row per sample, no footer on success
    int rows = 0;
    std::string line;
    while (std::getline(in1, line)) ++rows;
    CHECK(rows == static_cast<int>(traj.times.size()));
    CHECK(s1.str().find('#') == std::string::npos);
}

TEST_CASE("failed trajectories carry a csv footer") {
    const ModelParams params = baseline();
    const Trajectory traj = integrate_fixed(params, NetworkState::constant(4, 1e3, 0.0),
                                            IntegratorConfig(0.5, 5.0));
    REQUIRE(traj.failed());
    std::ostringstream out;
    write_state_csv(out, traj);
    CHECK(out.str().find("# integration failed at t=") != std::string::npos);
}
