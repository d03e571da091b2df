#include "fsmkit/emit.hpp"

#include "fsmkit/errors.hpp"

#include <algorithm>
#include <set>

namespace fsmkit {

PinMap default_itlc_pins() {
    return {{
        {"c", "N17", PinKind::Input},
        {"ts", "H18", PinKind::Input},
        {"tl", "L14", PinKind::Input},
        {"mr", "F9", PinKind::Output},
        {"my", "E9", PinKind::Output},
        {"mg", "D11", PinKind::Output},
        {"sr", "F11", PinKind::Output},
        {"sy", "E11", PinKind::Output},
        {"sg", "E12", PinKind::Output},
    }};
}

PinMap parse_pins(std::string_view text) {
    PinMap pins;
    std::set<std::string> seen;
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

        std::vector<std::string> w;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::string_view(" \t\r").find(line[i]) != std::string_view::npos)
                ++i;
            const std::size_t b = i;
            while (i < line.size() && std::string_view(" \t\r").find(line[i]) == std::string_view::npos)
                ++i;
            if (i > b)
                w.emplace_back(line.substr(b, i - b));
        }
        if (w.empty())
            continue;
        auto where = "pins line " + std::to_string(line_no) + ": ";
        if (w.size() != 3)
            throw ConfigError(where + "expected '<signal> <pin> <input|output>'");
        if (!is_identifier(w[0]))
            throw ConfigError(where + "'" + w[0] + "' is not a signal name");
        if (w[2] != "input" && w[2] != "output")
            throw ConfigError(where + "direction must be 'input' or 'output'");
        if (w[1].find('"') != std::string::npos)
            throw ConfigError(where + "pin location may not contain quotes");
        if (!seen.insert(w[0]).second)
            throw ConfigError(where + "signal '" + w[0] + "' mapped twice");
        pins.entries.push_back({w[0], w[1], w[2] == "input" ? PinKind::Input : PinKind::Output});
    }
    return pins;
}

void check_pins(const PinMap& pins, const FsmSpec& spec) {
    std::set<std::string> seen;
    auto has = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    for (const auto& p : pins.entries) {
        if (!seen.insert(p.signal).second)
            throw ConfigError("signal '" + p.signal + "' mapped twice");
        const bool is_input = has(spec.inputs, p.signal);
        const bool is_output = has(spec.moore_outputs, p.signal) || has(spec.pulse_outputs, p.signal);
        if (!is_input && !is_output)
            throw ConfigError("pin map names '" + p.signal + "', which '" + spec.name + "' does not declare");
        if ((p.kind == PinKind::Input) != is_input)
            throw ConfigError("pin map direction of '" + p.signal + "' disagrees with the spec");
    }
}

std::string emit_ucf(const PinMap& pins) {
    std::string out;
    for (const auto& p : pins.entries)
        out += "NET \"" + p.signal + "\" LOC = \"" + p.location + "\";\n";
    return out;
}

namespace {

const std::set<std::string>& verilog_keywords() {
    static const std::set<std::string> kw{
        "always", "and", "assign", "automatic", "begin", "buf", "bufif0", "bufif1", "case", "casex", "casez",
        "cell", "cmos", "config", "deassign", "default", "defparam", "design", "disable", "edge", "else", "end",
        "endcase", "endconfig", "endfunction", "endgenerate", "endmodule", "endprimitive", "endspecify",
        "endtable", "endtask", "event", "for", "force", "forever", "fork", "function", "generate", "genvar",
        "highz0", "highz1", "if", "ifnone", "incdir", "include", "initial", "inout", "input", "instance",
        "integer", "join", "large", "liblist", "library", "localparam", "macromodule", "medium", "module",
        "nand", "negedge", "nmos", "nor", "noshowcancelled", "not", "notif0", "notif1", "or", "output",
        "parameter", "pmos", "posedge", "primitive", "pull0", "pull1", "pulldown", "pullup",
        "pulsestyle_ondetect", "pulsestyle_onevent", "rcmos", "real", "realtime", "reg", "release", "repeat",
        "rnmos", "rpmos", "rtran", "rtranif0", "rtranif1", "scalared", "showcancelled", "signed", "small",
        "specify", "specparam", "strong0", "strong1", "supply0", "supply1", "table", "task", "time", "tran",
        "tranif0", "tranif1", "tri", "tri0", "tri1", "triand", "trior", "trireg", "unsigned", "use", "uwire",
        "vectored", "wait", "wand", "weak0", "weak1", "while", "wire", "wor", "xnor", "xor"};
    return kw;
}

std::string bits(std::uint64_t value, std::size_t width) {
    std::string s = std::to_string(width) + "'b";
    for (std::size_t i = 0; i < width; ++i)
        s += ((value >> (width - 1 - i)) & 1u) ? '1' : '0';
    return s;
}

} // namespace

EmitError::EmitError(std::vector<std::string> offenders)
    : std::runtime_error([&] {
          std::string msg = "names unusable in Verilog:";
          for (const auto& o : offenders)
              msg += ' ' + o;
          return msg;
      }()),
      offenders_(std::move(offenders)) {}

std::size_t state_register_width(std::size_t states, StateEncoding encoding) {
    if (encoding == StateEncoding::OneHot)
        return std::max<std::size_t>(states, 1);
    std::size_t width = 1;
    while ((std::size_t{1} << width) < states)
        ++width;
    return width;
}

std::string emit_verilog(const FsmSpec& spec, const EmitOptions& opts) {
    const auto report = validate(spec);
    if (!report.ok())
        throw ContractViolation("cannot emit '" + spec.name + "': " + format_finding(spec, report.findings.front()));

    const std::string module = opts.module_name.empty() ? spec.name : opts.module_name;

    std::vector<std::string> offenders;
    std::set<std::string> used{"clk", "state", "next_state"};
    auto claim = [&](const std::string& name) {
        if (!is_identifier(name) || verilog_keywords().count(name) || !used.insert(name).second)
            offenders.push_back(name);
    };
    if (!is_identifier(module) || verilog_keywords().count(module))
        offenders.push_back(module);
    for (const auto* list : {&spec.inputs, &spec.moore_outputs, &spec.pulse_outputs})
        for (const auto& s : *list)
            claim(s);
    for (const auto& s : spec.states)
        claim(s.name);
    if (!offenders.empty())
        throw EmitError(std::move(offenders));
    if (opts.encoding == StateEncoding::OneHot && spec.states.size() > 64)
        throw ConfigError("one-hot encoding supports at most 64 states");

    const std::size_t width = state_register_width(spec.states.size(), opts.encoding);
    const std::string range = width > 1 ? "[" + std::to_string(width - 1) + ":0] " : "";
    auto code = [&](std::size_t index) {
        return bits(opts.encoding == StateEncoding::OneHot ? (std::uint64_t{1} << index) : index, width);
    };
    const GuardSyntax verilog_ops{"~", " & ", " | ", "1'b0", "1'b1"};

    std::string out;
    out += "// " + module + ": generated by fsmkit from machine '" + spec.name + "', " +
           (opts.encoding == StateEncoding::OneHot ? "one-hot" : "binary") + " state encoding.\n";
    out += "module " + module + " (\n";
    std::vector<std::string> ports{"input  wire clk"};
    for (const auto& s : spec.inputs)
        ports.push_back("input  wire " + s);
    for (const auto& s : spec.moore_outputs)
        ports.push_back("output wire " + s);
    for (const auto& s : spec.pulse_outputs)
        ports.push_back("output reg  " + s);
    for (std::size_t i = 0; i < ports.size(); ++i)
        out += "    " + ports[i] + (i + 1 < ports.size() ? ",\n" : "\n");
    out += ");\n\n";

    for (std::size_t i = 0; i < spec.states.size(); ++i)
        out += "    localparam " + range + spec.states[i].name + " = " + code(i) + ";\n";
    out += '\n';
    out += "    reg " + range + "state = " + spec.initial_state + ";\n";
    out += "    reg " + range + "next_state;\n\n";

    out += "    always @(posedge clk) begin\n";
    if (spec.reset_input) {
        out += "        if (" + *spec.reset_input + ")\n";
        out += "            state <= " + spec.initial_state + ";\n";
        out += "        else\n";
        out += "            state <= next_state;\n";
    } else {
        out += "        state <= next_state;\n";
    }
    out += "    end\n\n";

    out += "    always @(*) begin\n";
    out += "        next_state = state;\n";
    for (const auto& p : spec.pulse_outputs)
        out += "        " + p + " = 1'b0;\n";
    std::string indent = "        ";
    if (spec.reset_input) {
        out += "        if (!" + *spec.reset_input + ") begin\n";
        indent += "    ";
    }
    out += indent + "case (state)\n";
    for (const auto& st : spec.states) {
        out += indent + "    " + st.name + ": begin\n";
        for (std::size_t i = 0; i < st.transitions.size(); ++i) {
            const auto& t = st.transitions[i];
            out += indent + "        " + (i == 0 ? "if (" : "end else if (") + render_guard(t.guard, verilog_ops) +
                   ") begin\n";
            out += indent + "            next_state = " + t.destination + ";\n";
            for (const auto& p : t.pulses)
                out += indent + "            " + p + " = 1'b1;\n";
        }
        if (!st.transitions.empty())
            out += indent + "        end\n";
        out += indent + "    end\n";
    }
    out += indent + "    default: next_state = " + spec.initial_state + ";\n";
    out += indent + "endcase\n";
    if (spec.reset_input)
        out += "        end\n";
    out += "    end\n\n";

    for (const auto& o : spec.moore_outputs) {
        std::vector<std::string> terms;
        for (const auto& st : spec.states) {
            auto it = st.moore_assignments.find(o);
            if (it != st.moore_assignments.end() && it->second)
                terms.push_back("(state == " + st.name + ")");
        }
        std::string rhs;
        if (terms.empty())
            rhs = "1'b0";
        else if (terms.size() == spec.states.size())
            rhs = "1'b1";
        else
            for (std::size_t i = 0; i < terms.size(); ++i)
                rhs += (i ? " | " : "") + terms[i];
        out += "    assign " + o + " = " + rhs + ";\n";
    }
    out += "\nendmodule\n";
    return out;
}

} // namespace fsmkit
