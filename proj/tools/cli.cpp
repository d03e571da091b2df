#include "cli.hpp"

#include "fsmkit/dsl.hpp"
#include "fsmkit/emit.hpp"
#include "fsmkit/environment.hpp"
#include "fsmkit/errors.hpp"
#include "fsmkit/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace fsmkit::cli {

namespace {

// Reports a problem and maps it to an exit code.
struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{kUsageError, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size())))
        throw Failure{kUsageError, "cannot write '" + path + "'"};
}

FsmSpec load_spec(const std::string& path, std::ostream& err) {
    const auto parsed = parse_fsm(read_file(path));
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            err << format_parse_error(e, path) << '\n';
        throw Failure{kUsageError, ""};
    }
    return *parsed.spec;
}

// Prints findings and fails with status 1 when the machine is not deterministic and total.
void require_valid(const FsmSpec& spec, std::ostream& sink) {
    const auto report = validate(spec);
    for (const auto& f : report.findings)
        sink << format_finding(spec, f) << '\n';
    if (!report.ok())
        throw Failure{kCheckFailed, ""};
}

TimerConfig timer_from(std::int64_t short_ticks, std::int64_t long_ticks) {
    try {
        return TimerConfig::make(short_ticks, long_ticks);
    } catch (const ConfigError& e) {
        throw Failure{kUsageError, e.what()};
    }
}

struct Options {
    std::string fsm_path;
    std::string stim_path;
    std::int64_t short_ticks = 4;
    std::int64_t long_ticks = 16;
    std::string vcd_path;
    std::string log_path;
    std::string format = "verilog";
    std::string encoding = "binary";
    std::string pins_path;
    std::string out_path;
    std::string module_name;
    double arrival = 0.0;
    std::int64_t seeds = 1;
    std::int64_t horizon = 1000;
    std::int64_t service = 1;
    unsigned threads = 1;
};

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    const auto spec = load_spec(o.fsm_path, err);
    require_valid(spec, out);
    return kSuccess;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const auto cfg = timer_from(o.short_ticks, o.long_ticks);
    const auto spec = load_spec(o.fsm_path, err);
    require_valid(spec, err);
    Stimulus stim;
    try {
        stim = parse_stimulus(read_file(o.stim_path));
    } catch (const StimulusError& e) {
        throw Failure{kUsageError, o.stim_path + ": " + e.what()};
    }
    Trace trace;
    try {
        trace = simulate(spec, cfg, stim);
    } catch (const ConfigError& e) {
        throw Failure{kUsageError, e.what()};
    }
    const auto log = format_tick_log(trace);
    if (!o.vcd_path.empty())
        write_file(o.vcd_path, write_vcd(trace));
    if (!o.log_path.empty())
        write_file(o.log_path, log);
    else
        out << log;
    return kSuccess;
}

int cmd_emit(const Options& o, std::ostream& out, std::ostream& err) {
    const auto spec = load_spec(o.fsm_path, err);
    require_valid(spec, err);
    std::string text;
    if (o.format == "ucf") {
        PinMap pins;
        try {
            pins = o.pins_path.empty() ? default_itlc_pins() : parse_pins(read_file(o.pins_path));
            check_pins(pins, spec);
        } catch (const ConfigError& e) {
            throw Failure{kUsageError, e.what()};
        }
        text = emit_ucf(pins);
    } else {
        EmitOptions opts;
        opts.encoding = o.encoding == "onehot" ? StateEncoding::OneHot : StateEncoding::Binary;
        opts.module_name = o.module_name;
        try {
            text = emit_verilog(spec, opts);
        } catch (const std::runtime_error& e) {
            throw Failure{kUsageError, e.what()};
        }
    }
    if (o.out_path.empty())
        out << text;
    else
        write_file(o.out_path, text);
    return kSuccess;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    const auto cfg = timer_from(o.short_ticks, o.long_ticks);
    if (!(o.arrival >= 0.0 && o.arrival <= 1.0))
        throw Failure{kUsageError, "--arrival must be within [0, 1]"};
    if (o.seeds < 1)
        throw Failure{kUsageError, "--seeds must be at least 1"};
    if (o.horizon < 1)
        throw Failure{kUsageError, "--horizon must be at least 1"};
    if (o.service < 1)
        throw Failure{kUsageError, "--service must be at least 1"};
    const auto spec = load_spec(o.fsm_path, err);
    require_valid(spec, err);

    TrafficModel model;
    model.arrival_prob = o.arrival;
    model.horizon = static_cast<std::size_t>(o.horizon);
    model.service_rate = static_cast<std::size_t>(o.service);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.seeds));
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});

    std::vector<Metrics> runs;
    try {
        runs = run_sweep(spec, cfg, model, seeds, o.threads);
    } catch (const ConfigError& e) {
        throw Failure{kUsageError, e.what()};
    }
    for (std::size_t i = 0; i < runs.size(); ++i)
        out << "seed=" << seeds[i] << ' ' << format_metrics_record(runs[i]) << '\n';
    out << "aggregate " << format_metrics_record(aggregate(runs)) << '\n';
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Define, check, simulate and emit clocked Moore machines", "fsmkit"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("check", "Report overlapping or missing transitions");
    check->add_option("fsm", o.fsm_path, "Machine description (.fsm)")->required();

    auto* sim = app.add_subcommand("simulate", "Run the closed-loop controller against a stimulus");
    sim->add_option("fsm", o.fsm_path, "Machine description (.fsm)")->required();
    sim->add_option("stim", o.stim_path, "Stimulus (.stim)")->required();
    sim->add_option("--short", o.short_ticks, "Ticks until ts rises")->capture_default_str();
    sim->add_option("--long", o.long_ticks, "Ticks until tl rises")->capture_default_str();
    sim->add_option("--vcd", o.vcd_path, "Write a value change dump here");
    sim->add_option("--log", o.log_path, "Write the per-tick log here instead of stdout");

    auto* emit = app.add_subcommand("emit", "Generate Verilog or a UCF pin constraint file");
    emit->add_option("fsm", o.fsm_path, "Machine description (.fsm)")->required();
    emit->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"verilog", "ucf"}))
        ->capture_default_str();
    emit->add_option("--encoding", o.encoding, "State register encoding")
        ->check(CLI::IsMember({"binary", "onehot"}))
        ->capture_default_str();
    emit->add_option("--pins", o.pins_path, "Pin map: '<signal> <pin> <input|output>' per line");
    emit->add_option("--module", o.module_name, "Verilog module name (default: machine name)");
    emit->add_option("-o,--output", o.out_path, "Write here instead of stdout");

    auto* bench = app.add_subcommand("bench", "Seeded side-road traffic replicas");
    bench->add_option("fsm", o.fsm_path, "Machine description (.fsm)")->required();
    bench->add_option("--arrival", o.arrival, "Arrival probability per tick per approach")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench->add_option("--seeds", o.seeds, "Replicas, seeded 0..K-1")->capture_default_str();
    bench->add_option("--horizon", o.horizon, "Ticks per replica")->capture_default_str();
    bench->add_option("--short", o.short_ticks, "Ticks until ts rises")->capture_default_str();
    bench->add_option("--long", o.long_ticks, "Ticks until tl rises")->capture_default_str();
    bench->add_option("--service", o.service, "Departures per side-green tick")->capture_default_str();
    bench->add_option("--threads", o.threads, "Worker threads")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*check)
            return cmd_check(o, out, err);
        if (*sim)
            return cmd_simulate(o, out, err);
        if (*emit)
            return cmd_emit(o, out, err);
        return cmd_bench(o, out, err);
    } catch (const Failure& f) {
        if (!f.message.empty())
            err << "fsmkit: " << f.message << '\n';
        return f.code;
    }
}

} // namespace fsmkit::cli
