#include "fsmkit/sim.hpp"

#include "fsmkit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace fsmkit {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > b)
            out.push_back(s.substr(b, i - b));
    }
    return out;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::size_t index_in(const std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw std::out_of_range("trace has no signal '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
}

Trace empty_trace(const FsmSpec& spec) {
    Trace t;
    t.spec_name = spec.name;
    for (const auto& s : spec.states)
        t.state_names.push_back(s.name);
    t.input_names = spec.inputs;
    t.moore_names = spec.moore_outputs;
    t.pulse_names = spec.pulse_outputs;
    return t;
}

} // namespace

Stimulus parse_stimulus(std::string_view text) {
    Stimulus stim;
    std::optional<std::uint64_t> horizon;
    ExternalInputs current;
    std::optional<std::uint64_t> last_tick;
    std::vector<std::pair<std::uint64_t, ExternalInputs>> changes;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto w = words(line);

        if (w[0] == "horizon") {
            if (horizon)
                throw StimulusError(line_no, "repeated horizon");
            if (w.size() != 2)
                throw StimulusError(line_no, "expected 'horizon <n>'");
            auto n = to_uint(w[1]);
            if (!n || *n == 0)
                throw StimulusError(line_no, "horizon must be a positive integer");
            horizon = n;
            continue;
        }
        if (!horizon)
            throw StimulusError(line_no, "missing 'horizon <n>' header");

        auto tick = to_uint(w[0]);
        if (!tick)
            throw StimulusError(line_no, "expected a tick number, found '" + std::string(w[0]) + "'");
        if (last_tick && *tick <= *last_tick)
            throw StimulusError(line_no, "non-monotonic tick " + std::to_string(*tick) + " after " +
                                             std::to_string(*last_tick));
        if (*tick >= *horizon)
            throw StimulusError(line_no, "tick " + std::to_string(*tick) + " is beyond horizon " +
                                             std::to_string(*horizon));
        if (w.size() < 2)
            throw StimulusError(line_no, "expected c=<bit> and/or reset=<bit>");
        std::set<std::string_view> seen;
        for (std::size_t i = 1; i < w.size(); ++i) {
            const auto eq = w[i].find('=');
            if (eq == std::string_view::npos)
                throw StimulusError(line_no, "expected <signal>=<bit>, found '" + std::string(w[i]) + "'");
            const auto key = w[i].substr(0, eq);
            const auto val = w[i].substr(eq + 1);
            if (key != "c" && key != "reset")
                throw StimulusError(line_no, "unknown stimulus signal '" + std::string(key) + "'");
            if (!seen.insert(key).second)
                throw StimulusError(line_no, "signal '" + std::string(key) + "' given twice");
            if (val != "0" && val != "1")
                throw StimulusError(line_no, "malformed bit '" + std::string(val) + "' for " + std::string(key));
            (key == "c" ? current.c : current.reset) = val == "1";
        }
        changes.emplace_back(*tick, current);
        last_tick = tick;
    }
    if (!horizon)
        throw StimulusError(std::max(line_no, 1), "missing 'horizon <n>' header");

    stim.ticks.assign(*horizon, ExternalInputs{});
    for (std::size_t i = 0; i < changes.size(); ++i) {
        const auto end = i + 1 < changes.size() ? changes[i + 1].first : *horizon;
        std::fill(stim.ticks.begin() + static_cast<std::ptrdiff_t>(changes[i].first),
                  stim.ticks.begin() + static_cast<std::ptrdiff_t>(end), changes[i].second);
    }
    return stim;
}

bool Trace::input(const TickRecord& r, std::string_view name) const {
    return (r.inputs >> index_in(input_names, name)) & 1u;
}

bool Trace::output(const TickRecord& r, std::string_view name) const {
    return (r.outputs >> index_in(moore_names, name)) & 1u;
}

bool Trace::pulse(const TickRecord& r, std::string_view name) const {
    return (r.pulses >> index_in(pulse_names, name)) & 1u;
}

ClosedLoop::ClosedLoop(const CompiledFsm& fsm, const TimerConfig& cfg)
    : fsm_(&fsm), cfg_(cfg), state_(fsm.initial()), trace_(empty_trace(fsm.spec())) {
    const auto& spec = fsm.spec();
    const std::set<std::string> expected{"reset", "c", "ts", "tl"};
    const std::set<std::string> actual(spec.inputs.begin(), spec.inputs.end());
    if (actual != expected || spec.inputs.size() != expected.size())
        throw ConfigError("closed-loop simulation needs inputs exactly {reset, c, ts, tl}; '" + spec.name +
                          "' declares a different set");
    auto st = fsm.pulse_index("st");
    if (!st)
        throw ConfigError("closed-loop simulation needs a pulse output 'st'");
    if (cfg.short_ticks == 0 || cfg.short_ticks >= cfg.long_ticks)
        throw ConfigError("short_ticks must be < long_ticks");
    bit_reset_ = *fsm.input_index("reset");
    bit_c_ = *fsm.input_index("c");
    bit_ts_ = *fsm.input_index("ts");
    bit_tl_ = *fsm.input_index("tl");
    bit_st_ = *st;
    trace_.timer = cfg;
}

const TickRecord& ClosedLoop::tick(const ExternalInputs& in) {
    const auto levels = timer_outputs(cfg_, timer_);
    std::uint32_t mask = 0;
    mask |= std::uint32_t{in.reset} << bit_reset_;
    mask |= std::uint32_t{in.c} << bit_c_;
    mask |= std::uint32_t{levels.ts} << bit_ts_;
    mask |= std::uint32_t{levels.tl} << bit_tl_;

    const auto step = fsm_->step(state_, mask);
    const bool st = (step.pulses >> bit_st_) & 1u;

    trace_.records.push_back(
        {trace_.records.size(), state_, mask, fsm_->moore_mask(state_), step.pulses, timer_.count});

    state_ = step.next;
    timer_ = timer_commit(cfg_, timer_, st);
    return trace_.records.back();
}

Trace simulate(const CompiledFsm& fsm, const TimerConfig& cfg, const Stimulus& stim) {
    if (stim.ticks.empty())
        throw ConfigError("stimulus is empty");
    ClosedLoop loop(fsm, cfg);
    for (const auto& in : stim.ticks)
        loop.tick(in);
    return std::move(loop).take_trace();
}

Trace simulate(const FsmSpec& spec, const TimerConfig& cfg, const Stimulus& stim) {
    const auto report = validate(spec);
    if (!report.ok())
        throw ConfigError("spec '" + spec.name + "' has validation findings: " +
                          format_finding(spec, report.findings.front()));
    const CompiledFsm fsm(spec);
    return simulate(fsm, cfg, stim);
}

Trace simulate_open_loop(const FsmSpec& spec, std::span<const InputValuation> inputs) {
    if (inputs.empty())
        throw ConfigError("stimulus is empty");
    const auto report = validate(spec);
    if (!report.ok())
        throw ConfigError("spec '" + spec.name + "' has validation findings: " +
                          format_finding(spec, report.findings.front()));
    const CompiledFsm fsm(spec);
    // Check every tick before running any of them.
    std::vector<std::uint32_t> masks;
    masks.reserve(inputs.size());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        std::uint32_t mask = 0;
        if (inputs[t].size() != spec.inputs.size())
            throw ConfigError("tick " + std::to_string(t) + ": valuation does not match the spec inputs");
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
            auto it = inputs[t].find(spec.inputs[i]);
            if (it == inputs[t].end())
                throw ConfigError("tick " + std::to_string(t) + ": missing input '" + spec.inputs[i] + "'");
            mask |= std::uint32_t{it->second} << i;
        }
        masks.push_back(mask);
    }

    Trace trace = empty_trace(spec);
    std::uint32_t state = fsm.initial();
    for (std::size_t t = 0; t < masks.size(); ++t) {
        const auto step = fsm.step(state, masks[t]);
        trace.records.push_back({t, state, masks[t], fsm.moore_mask(state), step.pulses, std::nullopt});
        state = step.next;
    }
    return trace;
}

namespace {

std::string vcd_id(std::size_t n) {
    // Printable ASCII '!'..'~' as base-94 digits.
    std::string id;
    do {
        id += static_cast<char>('!' + n % 94);
        n /= 94;
    } while (n-- > 0);
    return id;
}

std::string binary(std::uint32_t value, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t i = 0; i < width; ++i)
        if ((value >> (width - 1 - i)) & 1u)
            s[i] = '1';
    return s;
}

} // namespace

std::string write_vcd(const Trace& trace) {
    struct Signal {
        std::string name;
        std::string id;
        std::uint32_t TickRecord::*field; // nullptr for the state vector
        std::size_t bit;
    };
    std::vector<Signal> signals;
    auto add = [&](const std::vector<std::string>& names, std::uint32_t TickRecord::*field) {
        for (std::size_t i = 0; i < names.size(); ++i)
            signals.push_back({names[i], vcd_id(signals.size()), field, i});
    };
    add(trace.input_names, &TickRecord::inputs);
    add(trace.pulse_names, &TickRecord::pulses);
    add(trace.moore_names, &TickRecord::outputs);

    std::size_t state_width = 1;
    while ((std::size_t{1} << state_width) < trace.state_names.size())
        ++state_width;
    const std::string state_id = vcd_id(signals.size());

    std::string out;
    out += "$version fsmkit $end\n";
    out += "$timescale 1 ns $end\n";
    out += "$scope module " + trace.spec_name + " $end\n";
    for (const auto& s : signals)
        out += "$var wire 1 " + s.id + ' ' + s.name + " $end\n";
    out += "$var wire " + std::to_string(state_width) + ' ' + state_id + " state $end\n";
    out += "$upscope $end\n";
    out += "$enddefinitions $end\n";

    auto value_of = [](const Signal& s, const TickRecord& r) { return ((r.*(s.field)) >> s.bit) & 1u; };
    auto emit_bit = [&](const Signal& s, const TickRecord& r) {
        out += value_of(s, r) ? '1' : '0';
        out += s.id + '\n';
    };
    auto emit_state = [&](const TickRecord& r) { out += 'b' + binary(r.state, state_width) + ' ' + state_id + '\n'; };

    if (trace.records.empty())
        return out;
    const TickRecord* prev = &trace.records.front();
    out += "#0\n$dumpvars\n";
    for (const auto& s : signals)
        emit_bit(s, *prev);
    emit_state(*prev);
    out += "$end\n";

    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const TickRecord& r = trace.records[i];
        std::string section;
        std::swap(section, out);
        for (const auto& s : signals)
            if (value_of(s, r) != value_of(s, *prev))
                emit_bit(s, r);
        if (r.state != prev->state)
            emit_state(r);
        std::swap(section, out);
        if (!section.empty())
            out += '#' + std::to_string(r.tick) + '\n' + section;
        prev = &r;
    }
    return out;
}

std::string format_tick_log(const Trace& trace) {
    static const std::vector<std::string> kLights{"mg", "my", "mr", "sg", "sy", "sr"};
    const bool has_lights = std::all_of(kLights.begin(), kLights.end(), [&](const std::string& l) {
        return std::find(trace.moore_names.begin(), trace.moore_names.end(), l) != trace.moore_names.end();
    });
    const auto& lights = has_lights ? kLights : trace.moore_names;

    auto has = [](const std::vector<std::string>& names, const char* n) {
        return std::find(names.begin(), names.end(), n) != names.end();
    };

    std::string out;
    for (const auto& r : trace.records) {
        out += std::to_string(r.tick) + ' ' + trace.state_name(r);
        for (const char* in : {"c", "ts", "tl"})
            if (has(trace.input_names, in))
                out += std::string(" ") + in + '=' + (trace.input(r, in) ? '1' : '0');
        if (has(trace.pulse_names, "st"))
            out += std::string(" st=") + (trace.pulse(r, "st") ? '1' : '0');
        out += ' ';
        for (const auto& l : lights)
            out += trace.output(r, l) ? '1' : '0';
        out += '\n';
    }
    return out;
}

} // namespace fsmkit
