#include "pcns/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pcns/checkpoint.hpp"
#include "pcns/config.hpp"
#include "pcns/csv.hpp"
#include "pcns/errors.hpp"
#include "pcns/fit.hpp"
#include "pcns/harness.hpp"
#include "pcns/lagrangian.hpp"
#include "pcns/pulse.hpp"
#include "pcns/schedule.hpp"
#include "pcns/solver.hpp"
#include "pcns/verify.hpp"

namespace pcns {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

std::string summary_text(const RunConfig& c, const RunSummary& s, const std::string& status) {
    std::ostringstream os;
    auto d = [](double v) { return format_double(v); };
    os << "status = " << status << "\n"
       << "grid = " << c.n << "^3, L = " << d(c.L) << "\n"
       << "steps = " << s.steps << "\n"
       << "t_final = " << d(s.t_final) << "\n"
       << "dt_min = " << d(s.dt_min) << "\n"
       << "dt_max = " << d(s.dt_max) << "\n"
       << "min_rho = " << d(s.min_rho) << "\n"
       << "max_rho = " << d(s.max_rho) << "\n"
       << "mass_initial = " << d(s.mass_initial) << "\n"
       << "max_mass_drift = " << d(s.max_mass_drift) << "\n"
       << "wall_seconds = " << d(s.wall_seconds) << "\n";
    return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    if (!os) throw InputError("cannot write " + p.string());
    os << text;
}

int cmd_init(const std::string& config, const std::string& dir, std::ostream& out) {
    RunConfig c = config.empty() ? RunConfig{} : read_config(config);
    if (!dir.empty()) c.output_dir = dir;
    c.validate();
    fs::create_directories(c.output_dir);
    write_text(c.output_dir / "run.cfg", format_config(c));
    const State s = build_pulse(c.pulse, c.grid());
    write_checkpoint(c.output_dir / "checkpoint_initial.pcns", s, c.pulse);
    out << "wrote " << (c.output_dir / "run.cfg").string() << " and "
        << (c.output_dir / "checkpoint_initial.pcns").string() << "\n";
    return kOk;
}

int cmd_run(const std::string& config, const std::string& from, std::ostream& out, std::ostream& err) {
    const RunConfig c = read_config(config);
    c.validate();
    State initial;
    if (from.empty()) {
        initial = build_pulse(c.pulse, c.grid());
    } else {
        initial = read_checkpoint(from).state;
        if (initial.grid() != c.grid()) throw InputError("checkpoint grid differs from the configuration");
    }
    fs::create_directories(c.output_dir);
    write_text(c.output_dir / "run.cfg", format_config(c));
    DiagnosticsCsv diag(c.output_dir / "diagnostics.csv");
    EnergyCsv energy(c.output_dir / "energy.csv");
    RunSinks sinks;
    sinks.diagnostics = c.diagnostics;
    sinks.observers = {&diag, &energy};
    sinks.checkpoint_dir = c.output_dir;
    std::optional<ParticleTracker> tracker;
    if (!c.seeds.empty()) {
        tracker.emplace(c.seeds, c.tau, c.pulse, c.track_every);
        sinks.observers.push_back(&*tracker);
    }
    auto write_tracks = [&] {
        if (!tracker) return;
        for (std::size_t k = 0; k < tracker->trajectories().size(); ++k)
            write_trajectory_csv(c.output_dir / ("trajectory_" + std::to_string(k) + ".csv"),
                                 tracker->trajectories()[k]);
    };
    try {
        const RunSummary s = run(initial, c.pulse, c.solver, sinks);
        write_tracks();
        const std::string text = summary_text(c, s, "completed");
        write_text(c.output_dir / "summary.txt", text);
        out << text;
        return kOk;
    } catch (const Error& e) {
        write_tracks();
        write_text(c.output_dir / "summary.txt", std::string("status = aborted\nreason = ") + e.what() + "\n");
        err << "run aborted: " << e.what() << "\n";
        return kCheckFailed;
    }
}

int cmd_diagnose(const std::string& config, const std::vector<std::string>& checkpoints, const std::string& csv,
                 std::ostream& out) {
    const RunConfig c = config.empty() ? RunConfig{} : read_config(config);
    std::optional<CsvWriter> file;
    if (!csv.empty()) file.emplace(csv, diagnostics_columns());
    if (!file) {
        const auto cols = diagnostics_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
    }
    for (const auto& path : checkpoints) {
        const Checkpoint ck = read_checkpoint(path);
        // Shape parameters are not stored; the configuration supplies them.
        PulseParams p = c.pulse;
        p.gamma = ck.params.gamma;
        p.mu = ck.params.mu;
        p.lambda = ck.params.lambda;
        const auto values = record_values(compute_record(ck.state, p, c.diagnostics));
        if (file) {
            file->row(values);
        } else {
            for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_double(values[i]);
            out << "\n";
        }
    }
    return kOk;
}

int cmd_envelope(double delta, double alpha, double gamma, double epsilon, const std::string& series,
                 std::ostream& out) {
    const EnvelopeSchedule s = envelope_schedule(delta, alpha, gamma, epsilon);
    out << schedule_text(s);
    if (series.empty()) return kOk;
    const CsvTable t = read_csv(series);
    const auto time = t.column("t");
    const auto a_inf = t.column("Linf_a");
    out << "\n" << thresholds_report(s, time, a_inf, t.column("L6_a"), t.column("L2_a")).text();
    const EnvelopeCheck chk = envelope_check(time, a_inf, s);
    out << "\n" << (chk.passed ? "PASS" : "FAIL") << " envelope: " << chk.summary << "\n";
    return chk.passed ? kOk : kCheckFailed;
}

int cmd_toy(double delta, double alpha, double gamma, const std::vector<double>& times, std::ostream& out) {
    const auto ode = toy_model_ode(delta, alpha, gamma, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        out << "t = " << format_double(times[i]) << "  f = " << format_double(toy_model(delta, alpha, gamma, times[i]))
            << "  ode = " << format_double(ode[i]) << "\n";
    return kOk;
}

int cmd_verify(const std::vector<std::string>& suites, const std::string& dir, bool quiet, std::ostream& out,
               std::ostream& err) {
    VerifyOptions opt;
    if (!dir.empty()) opt.output_dir = fs::path(dir);
    if (!quiet) opt.log = &err;
    int failed = 0;
    for (const auto& s : suites)
        for (const auto& r : run_suite(s, opt)) {
            out << format_result(r) << std::endl;
            if (!r.passed) ++failed;
        }
    return failed ? kCheckFailed : kOk;
}

int cmd_report(const std::string& dir_s, double t_a, std::ostream& out) {
    const fs::path dir(dir_s);
    const fs::path cfg_path = dir / "run.cfg";
    const RunConfig c = fs::exists(cfg_path) ? read_config(cfg_path) : RunConfig{};
    std::ostringstream os;
    if (fs::exists(dir / "summary.txt")) {
        std::ifstream in(dir / "summary.txt");
        os << "== run summary\n" << in.rdbuf() << "\n";
    }
    const CsvTable t = read_csv(dir / "diagnostics.csv");
    const auto time = t.column("t");
    const EnvelopeSchedule s = envelope_schedule(c.pulse.delta, c.pulse.alpha, c.pulse.gamma, c.pulse.epsilon);
    os << "== schedule\n" << schedule_text(s) << "\n";
    os << "== thresholds\n"
       << thresholds_report(s, time, t.column("Linf_a"), t.column("L6_a"), t.column("L2_a")).text() << "\n";
    os << "== decay fits on [" << format_double(t_a) << ", " << format_double(time.back()) << "]\n";
    for (const char* col : {"E", "D", "H_rho", "L2_sq_rho_u", "Linf_a"}) {
        const auto v = t.column(col);
        for (DecayModel m : {DecayModel::power, DecayModel::exponential}) {
            os << col << " " << to_string(m) << ": ";
            try {
                const FitResult f = fit_decay(time, v, t_a, time.back(), m);
                os << "exponent " << format_double(f.exponent) << ", r^2 " << format_double(f.r_squared) << ", "
                   << f.samples << " samples\n";
            } catch (const InputError& e) {
                os << "not fitted (" << e.what() << ")\n";
            }
        }
    }
    write_text(dir / "report.txt", os.str());
    out << os.str();
    return kOk;
}

} // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pseudo-spectral compressible Navier-Stokes runs with short-pulse data"};
    app.require_subcommand(1);

    std::string config, dir, from, csv, series;
    std::vector<std::string> checkpoints;
    std::vector<std::string> suites{"all"};
    std::vector<double> times;
    double delta = 0.125, alpha = 0.5, gamma = 1.0, epsilon = 0.1, t_a = 0.1;
    bool quiet = false;

    auto* init = app.add_subcommand("init", "Write a configuration template and the initial checkpoint");
    init->add_option("--config", config, "Start from this configuration instead of the defaults");
    init->add_option("--dir", dir, "Output directory (overrides output.dir)");

    auto* run_cmd = app.add_subcommand("run", "Integrate and stream CSV output");
    run_cmd->add_option("--config", config, "Run configuration")->required();
    run_cmd->add_option("--from", from, "Start from this checkpoint instead of the pulse");

    auto* diagnose = app.add_subcommand("diagnose", "Recompute diagnostics records from checkpoints");
    diagnose->add_option("--config", config, "Configuration supplying the diagnostics options");
    diagnose->add_option("--csv", csv, "Write the records here instead of standard output");
    diagnose->add_option("checkpoints", checkpoints, "Checkpoint files")->required();

    auto* envelope = app.add_subcommand("envelope", "Print the envelope schedule");
    envelope->add_option("--delta", delta)->required();
    envelope->add_option("--alpha", alpha)->required();
    envelope->add_option("--gamma", gamma)->required();
    envelope->add_option("--epsilon", epsilon, "Smallness parameter")->capture_default_str();
    envelope->add_option("--series", series, "diagnostics.csv to check against the schedule");

    auto* toy = app.add_subcommand("toy", "Evaluate the toy collapse model");
    toy->add_option("--delta", delta)->required();
    toy->add_option("--alpha", alpha)->required();
    toy->add_option("--gamma", gamma)->required();
    toy->add_option("--t", times, "Times")->required();

    auto* verify = app.add_subcommand("verify", "Run acceptance suites");
    verify->add_option("--suite", suites, "Suite names or all")->capture_default_str();
    verify->add_option("--out", dir, "Directory for benchmark CSV output");
    verify->add_flag("--quiet", quiet, "No progress messages");

    auto* report = app.add_subcommand("report", "Summarize a run directory into report.txt");
    report->add_option("--dir", dir, "Run output directory")->required();
    report->add_option("--fit-from", t_a, "Start of the decay fit window")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << app.get_name() << ": " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (init->parsed()) return cmd_init(config, dir, out);
        if (run_cmd->parsed()) return cmd_run(config, from, out, err);
        if (diagnose->parsed()) return cmd_diagnose(config, checkpoints, csv, out);
        if (envelope->parsed()) return cmd_envelope(delta, alpha, gamma, epsilon, series, out);
        if (toy->parsed()) return cmd_toy(delta, alpha, gamma, times, out);
        if (verify->parsed()) return cmd_verify(suites, dir, quiet, out, err);
        if (report->parsed()) return cmd_report(dir, t_a, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace pcns
