#include "fhn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "fhn/config.hpp"
#include "fhn/csv.hpp"
#include "fhn/diagnostics.hpp"
#include "fhn/integrator.hpp"
#include "fhn/model.hpp"
#include "fhn/sweep.hpp"

namespace fhn {

namespace {

constexpr const char* kUsage = R"(usage: fhn <constants|simulate|verify|sweep> [options] [overrides...]

options:
  --config PATH          read the JSON configuration document from PATH
  --out STEM             output file stem (default: command name + timestamp)
  --workers K            worker threads for sweep (fallback: FHN_WORKERS, then
                         hardware concurrency)
  --deterministic-names  drop the timestamp from the default output stem
  --help                 show this message

Any other --dotted.path VALUE pair overrides the matching config field, e.g.
  fhn simulate --model.p 10 --integ.t_end 50 --init.kind zero

exit codes: 0 success, 1 verification failure, 2 configuration error,
            3 integration failure, 4 I/O error
)";

struct CliArgs {
    std::string command;
    std::string config_path;
    std::string out_stem;
    std::optional<int> workers;
    bool deterministic_names = false;
    bool help = false;
    std::vector<std::pair<std::string, std::string>> overrides;
};

CliArgs parse_args(const std::vector<std::string>& args) {
    CliArgs a;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok == "--help" || tok == "-h") {
            a.help = true;
        } else if (tok == "--deterministic-names") {
            a.deterministic_names = true;
        } else if (tok == "--config" || tok == "--out" || tok == "--workers") {
            if (i + 1 >= args.size()) throw ConfigError(tok + " requires a value");
            const std::string& val = args[++i];
            if (tok == "--config") {
                a.config_path = val;
            } else if (tok == "--out") {
                a.out_stem = val;
            } else {
                try {
                    a.workers = std::stoi(val);
                } catch (const std::exception&) {
                    throw ConfigError("--workers requires an integer, got: " + val);
                }
                if (*a.workers < 1) throw ConfigError("--workers must be >= 1");
            }
        } else if (tok.rfind("--", 0) == 0) {
            if (i + 1 >= args.size()) throw ConfigError(tok + " requires a value");
            a.overrides.emplace_back(tok.substr(2), args[++i]);
        } else if (a.command.empty()) {
            a.command = tok;
        } else {
            throw ConfigError("unexpected positional argument: " + tok);
        }
    }
    return a;
}

std::string default_stem(const std::string& command, bool deterministic) {
    if (deterministic) return command;
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm_buf);
    return command + "-" + buf;
}

int resolve_workers(const CliArgs& args) {
    if (args.workers) return *args.workers;
    if (const char* env = std::getenv("FHN_WORKERS")) {
        int w = 0;
        try {
            w = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("FHN_WORKERS must be an integer, got: ") + env);
        }
        if (w < 1) throw ConfigError("FHN_WORKERS must be >= 1");
        return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_constants(const RunConfig& cfg, std::ostream& out) {
    const DerivedConstants k = cfg.envelope
                                   ? derived_constants(cfg.model, cfg.envelope->validated())
                                   : derived_constants(cfg.model);
    const int prec = cfg.precision;
    auto row = [&](const char* name, double v) {
        out << name << "," << format_double(v, prec) << "\n";
    };
    out << "quantity,value\n";
    row("lambda", k.lambda);
    row("beta", k.beta);
    row("gamma", k.gamma);
    row("c1", k.c1);
    row("c2", k.c2);
    row("q", k.q);
    row("sync_threshold", k.sync_threshold);
    row("rho", cfg.rho);
    row("t_absorb", absorbing_entry_time(cfg.rho, cfg.model));
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& stem, std::ostream& out,
                 std::ostream& err) {
    const NetworkState init = cfg.init.make(cfg.model.n);
    const Trajectory traj = cfg.method == IntegMethod::rk4
                                ? integrate_fixed(cfg.model, init, cfg.integ)
                                : integrate_adaptive(cfg.model, init, cfg.integ);
    const DiagnosticsSeries series = build_series(traj, cfg.model);

    const std::string state_path = stem + "_state.csv";
    const std::string diag_path = stem + "_diag.csv";
    {
        std::ofstream f(state_path);
        if (f) write_state_csv(f, traj, cfg.precision);
        if (!f) {
            err << "cannot write " << state_path << "\n";
            return 4;
        }
    }
    {
        std::ofstream f(diag_path);
        if (f) write_diag_csv(f, traj, series, cfg.precision);
        if (!f) {
            err << "cannot write " << diag_path << "\n";
            return 4;
        }
    }
    out << "wrote " << state_path << " and " << diag_path << " (" << traj.times.size()
        << " samples, " << traj.step_count << " steps)\n";
    if (traj.failed()) {
        err << "integration failed at t=" << format_double(traj.failure_time, 6)
            << (traj.failure == IntegrationFailure::non_finite_state
                    ? " (non-finite state)"
                    : " (step size underflow)")
            << "\n";
        return 3;
    }
    return 0;
}

struct BatteryResult {
    bool passed;
    std::string detail;
};

void report(std::ostream& out, const char* name, const BatteryResult& r) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << name << ": " << r.detail << "\n";
}

BatteryResult divergence_battery() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    double worst = 0.0;
    int worst_n = 0;
    const int trials = 10000;
    for (int k = 0; k < trials; ++k) {
        const int n = 4 + k % 61;
        std::vector<double> x(n);
        double norm_sq = 0.0;
        for (double& v : x) {
            v = dist(rng);
            norm_sq += v * v;
        }
        const double scaled = divergence_residual(x) / (1.0 + norm_sq);
        if (scaled > worst) {
            worst = scaled;
            worst_n = n;
        }
    }
    std::ostringstream msg;
    msg << "max scaled residual " << format_double(worst, 3) << " over " << trials
        << " vectors";
    if (worst >= 1e-12) msg << " (first failure regime: n=" << worst_n << ")";
    return {worst < 1e-12, msg.str()};
}

BatteryResult feedback_sum_battery(double p) {
    std::mt19937_64 rng(4048);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    double worst = 0.0;
    const int trials = 10000;
    for (int k = 0; k < trials; ++k) {
        const int n = 4 + k % 61;
        std::vector<double> x(n), y(n, 0.0);
        double norm_sq = 0.0;
        for (double& v : x) {
            v = dist(rng);
            norm_sq += v * v;
        }
        const NetworkState state(x, y);
        const double scaled = feedback_sum_identity_residual(state, p) / (1.0 + norm_sq);
        worst = std::max(worst, scaled);
    }
    std::ostringstream msg;
    msg << "max scaled residual " << format_double(worst, 3) << " over " << trials
        << " vectors";
    return {worst < 1e-12, msg.str()};
}

BatteryResult envelope_battery(const RunConfig& cfg) {
    const int samples = 100000;
    const double lo = -20.0, hi = 20.0;
    if (cfg.envelope) {
        const auto violations =
            verify_envelope(cfg.model.nonlinearity, cfg.envelope->lambda,
                            cfg.envelope->beta, cfg.envelope->gamma, lo, hi, samples);
        if (!violations.empty()) {
            const EnvelopeViolation& v = violations.front();
            std::ostringstream msg;
            msg << "violated at s=" << format_double(v.s, 9)
                << (v.quartic_bound_failed ? " (quartic bound)" : "")
                << (v.derivative_bound_failed ? " (derivative bound)" : "");
            return {false, msg.str()};
        }
        return {true, "user envelope holds on [-20,20], 100000 samples"};
    }
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> alphas{cfg.model.nonlinearity.alpha};
    for (int k = 0; k < 20; ++k) {
        double alpha = dist(rng);
        while (alpha <= 0.0 || alpha >= 1.0) alpha = dist(rng);
        alphas.push_back(alpha);
    }
    for (double alpha : alphas) {
        const CubicNonlinearity nl(alpha);
        const auto violations =
            verify_envelope(nl, envelope_for_cubic(nl), lo, hi, samples);
        if (!violations.empty()) {
            std::ostringstream msg;
            msg << "violated at s=" << format_double(violations.front().s, 9)
                << " for alpha=" << format_double(alpha, 9);
            return {false, msg.str()};
        }
    }
    std::ostringstream msg;
    msg << "holds for " << alphas.size() << " alphas on [-20,20], 100000 samples each";
    return {true, msg.str()};
}

BatteryResult convergence_battery(const RunConfig& cfg) {
    // moderate amplitude keeps fifth-order transient error out of the fit
    const NetworkState init = random_initial(cfg.model.n, 1.0, 0);
    const double order =
        convergence_order(cfg.model, init, 2.0, {0.02, 0.01, 0.005, 0.0025});
    std::ostringstream msg;
    msg << "observed order " << format_double(order, 4) << ", expected [3.8, 4.2]";
    return {order >= 3.8 && order <= 4.2, msg.str()};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    bool all = true;
    auto run = [&](const char* name, const BatteryResult& r) {
        report(out, name, r);
        all = all && r.passed;
    };
    run("divergence identity", divergence_battery());
    run("feedback-sum identity", feedback_sum_battery(cfg.model.p));
    run("assumption envelope", envelope_battery(cfg));
    run("convergence order", convergence_battery(cfg));
    return all ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, const std::string& stem, int workers,
              std::ostream& out, std::ostream& err) {
    const SweepGrid grid(cfg.sweep.p_values, cfg.sweep.a_values, cfg.sweep.alpha_values,
                         cfg.sweep.n_values, cfg.sweep.seeds, cfg.model,
                         cfg.sweep.init_radius, cfg.integ);
    const std::vector<SweepRecord> records = run_sweep(grid, workers);

    const std::string path = stem + "_sweep.csv";
    std::ofstream f(path);
    if (f) write_sweep_csv(f, records, cfg.precision);
    if (!f) {
        err << "cannot write " << path << "\n";
        return 4;
    }
    const long failures =
        std::count_if(records.begin(), records.end(),
                      [](const SweepRecord& r) { return r.failed; });
    out << "wrote " << records.size() << " cases to " << path << " using " << workers
        << (workers == 1 ? " worker" : " workers");
    if (failures > 0) out << " (" << failures << " failed integrations)";
    out << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    try {
        const CliArgs cli = parse_args(args);
        if (cli.help) {
            out << kUsage;
            return 0;
        }
        if (cli.command.empty()) {
            err << kUsage;
            return 2;
        }
        if (cli.command != "constants" && cli.command != "simulate" &&
            cli.command != "verify" && cli.command != "sweep") {
            err << "unknown command: " << cli.command << "\n" << kUsage;
            return 2;
        }

        std::string doc = "{}";
        if (!cli.config_path.empty()) {
            std::ifstream f(cli.config_path);
            if (!f) {
                err << "cannot read config file: " << cli.config_path << "\n";
                return 2;
            }
            std::ostringstream buf;
            buf << f.rdbuf();
            doc = buf.str();
        }
        apply_override(doc, "command", cli.command);
        for (const auto& [path, value] : cli.overrides) {
            apply_override(doc, path, value);
        }
        const RunConfig cfg = parse_config(doc);

        std::string stem = cli.out_stem;
        if (stem.empty()) stem = cfg.output_path;
        if (stem.empty()) stem = default_stem(cli.command, cli.deterministic_names);

        switch (cfg.command) {
            case Command::constants:
                return cmd_constants(cfg, out);
            case Command::simulate:
                return cmd_simulate(cfg, stem, out, err);
            case Command::verify:
                return cmd_verify(cfg, out);
            case Command::sweep:
                return cmd_sweep(cfg, stem, resolve_workers(cli), out, err);
        }
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace fhn
