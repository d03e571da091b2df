#include "fsmkit/dsl.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fsmkit {

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::Syntax:
        return "syntax";
    case ParseErrorKind::UnknownSignal:
        return "unknown-signal";
    case ParseErrorKind::DuplicateName:
        return "duplicate-name";
    case ParseErrorKind::BadBit:
        return "bad-bit";
    }
    return "?";
}

std::string format_parse_error(const ParseError& error, std::string_view origin) {
    std::string out(origin);
    out += ':' + std::to_string(error.span.line) + ':' + std::to_string(error.span.column) + ": ";
    out += to_string(error.kind);
    return out + ": " + error.message;
}

namespace {

enum class Tok { Ident, Number, LBrace, RBrace, Equals, Arrow, LParen, RParen, Bang, Amp, Pipe, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

// Thrown inside a line to abandon it; the outer loop records it and moves on.
struct LineError {
    ParseError error;
};

[[noreturn]] void fail(const SourceSpan& span, ParseErrorKind kind, std::string message) {
    throw LineError{{span, kind, std::move(message)}};
}

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex_line(std::string_view line, int line_no) {
    std::vector<Token> toks;
    std::size_t i = 0;
    auto span_at = [&](std::size_t start, std::size_t len) {
        return SourceSpan{line_no, static_cast<int>(start) + 1, static_cast<int>(std::max<std::size_t>(len, 1))};
    };
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (ident_start(c)) {
            while (i < line.size() && ident_char(line[i]))
                ++i;
            toks.push_back({Tok::Ident, std::string(line.substr(start, i - start)), span_at(start, i - start)});
            continue;
        }
        if (digit(c)) {
            while (i < line.size() && ident_char(line[i]))
                ++i;
            const auto text = line.substr(start, i - start);
            if (!std::all_of(text.begin(), text.end(), digit))
                fail(span_at(start, i - start), ParseErrorKind::Syntax, "malformed name '" + std::string(text) + "'");
            toks.push_back({Tok::Number, std::string(text), span_at(start, i - start)});
            continue;
        }
        Tok kind;
        std::size_t len = 1;
        switch (c) {
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '=': kind = Tok::Equals; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '!': kind = Tok::Bang; break;
        case '&': kind = Tok::Amp; break;
        case '|': kind = Tok::Pipe; break;
        case '-':
            if (i + 1 < line.size() && line[i + 1] == '>') {
                kind = Tok::Arrow;
                len = 2;
                break;
            }
            [[fallthrough]];
        default: {
            // Span a whole UTF-8 sequence so the column range stays on one character.
            std::size_t n = 1;
            while (i + n < line.size() && (static_cast<unsigned char>(line[i + n]) & 0xC0) == 0x80)
                ++n;
            fail(span_at(start, n), ParseErrorKind::Syntax, "unexpected character '" + std::string(line.substr(start, n)) + "'");
        }
        }
        toks.push_back({kind, std::string(line.substr(start, len)), span_at(start, len)});
        i += len;
    }
    toks.push_back({Tok::End, "", span_at(line.size(), 1)});
    return toks;
}

struct NameRef {
    std::string name;
    SourceSpan span;
};

struct RawTransition {
    NameRef source;
    NameRef destination;
    Guard guard;
    std::vector<NameRef> guard_vars;
    std::vector<NameRef> pulses;
};

struct RawState {
    NameRef name;
    std::vector<std::pair<NameRef, bool>> assignments;
};

class LineParser {
public:
    explicit LineParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }

    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind)
            fail(peek().span, ParseErrorKind::Syntax, std::string("expected ") + what + unexpected_suffix());
        return next();
    }

    NameRef name(const char* what) {
        const Token& t = expect(Tok::Ident, what);
        return {t.text, t.span};
    }

    void expect_end() {
        if (!at_end())
            fail(peek().span, ParseErrorKind::Syntax, "unexpected '" + peek().text + "'");
    }

    std::vector<NameRef> names_to_end() {
        std::vector<NameRef> out;
        while (!at_end())
            out.push_back(name("a name"));
        return out;
    }

    bool bit(const Token& t) {
        if (t.kind != Tok::Number)
            fail(t.span, ParseErrorKind::Syntax, "expected 0 or 1" + unexpected_suffix(t));
        if (t.text != "0" && t.text != "1")
            fail(t.span, ParseErrorKind::BadBit, "'" + t.text + "' is not a bit");
        return t.text == "1";
    }

    Guard expression(std::vector<NameRef>& vars) { return parse_or(vars); }

private:
    std::string unexpected_suffix() const { return unexpected_suffix(peek()); }
    static std::string unexpected_suffix(const Token& t) {
        return t.kind == Tok::End ? " at end of line" : ", found '" + t.text + "'";
    }

    Guard parse_or(std::vector<NameRef>& vars) {
        Guard lhs = parse_and(vars);
        while (peek().kind == Tok::Pipe) {
            next();
            lhs = Guard::either(std::move(lhs), parse_and(vars));
        }
        return lhs;
    }

    Guard parse_and(std::vector<NameRef>& vars) {
        Guard lhs = parse_unary(vars);
        while (peek().kind == Tok::Amp) {
            next();
            lhs = Guard::both(std::move(lhs), parse_unary(vars));
        }
        return lhs;
    }

    Guard parse_unary(std::vector<NameRef>& vars) {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Bang:
            next();
            return Guard::negate(parse_unary(vars));
        case Tok::LParen: {
            next();
            Guard inner = parse_or(vars);
            expect(Tok::RParen, "')'");
            return inner;
        }
        case Tok::Number:
            return Guard::constant(bit(next()));
        case Tok::Ident:
            vars.push_back({t.text, t.span});
            return Guard::variable(next().text);
        default:
            fail(t.span, ParseErrorKind::Syntax, "expected an operand" + unexpected_suffix());
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

struct Document {
    std::optional<NameRef> header;
    std::vector<NameRef> inputs, outputs, pulses;
    std::optional<NameRef> initial;
    std::optional<NameRef> reset;
    std::vector<RawState> states;
    std::vector<RawTransition> transitions;
};

void parse_line(LineParser& p, Document& doc, std::vector<ParseError>& errors) {
    const Token& kw = p.peek();
    if (kw.kind != Tok::Ident)
        fail(kw.span, ParseErrorKind::Syntax, "expected a statement keyword, found '" + kw.text + "'");
    const std::string keyword = p.next().text;

    auto single = [&](std::optional<NameRef>& slot, const char* what) {
        NameRef n = p.name(what);
        p.expect_end();
        if (slot)
            fail(kw.span, ParseErrorKind::DuplicateName, "repeated '" + keyword + "' declaration");
        slot = std::move(n);
    };

    if (keyword == "fsm") {
        single(doc.header, "machine name");
    } else if (keyword == "inputs" || keyword == "outputs" || keyword == "pulses") {
        auto& list = keyword == "inputs" ? doc.inputs : keyword == "outputs" ? doc.outputs : doc.pulses;
        for (auto& n : p.names_to_end())
            list.push_back(std::move(n));
    } else if (keyword == "initial") {
        single(doc.initial, "initial state name");
    } else if (keyword == "reset") {
        single(doc.reset, "reset input name");
    } else if (keyword == "state") {
        RawState st{p.name("state name"), {}};
        p.expect(Tok::LBrace, "'{'");
        std::set<std::string> seen;
        while (p.peek().kind != Tok::RBrace) {
            NameRef out = p.name("'<output>=<bit>' or '}'");
            p.expect(Tok::Equals, "'='");
            const bool value = p.bit(p.next());
            if (!seen.insert(out.name).second) {
                errors.push_back({out.span, ParseErrorKind::DuplicateName,
                                  "output '" + out.name + "' assigned twice in state '" + st.name.name + "'"});
                continue;
            }
            st.assignments.emplace_back(std::move(out), value);
        }
        p.next();
        p.expect_end();
        doc.states.push_back(std::move(st));
    } else if (keyword == "trans") {
        RawTransition t{p.name("source state"), {}, Guard::constant(false), {}, {}};
        p.expect(Tok::Arrow, "'->'");
        t.destination = p.name("destination state");
        const Token& when = p.expect(Tok::Ident, "'when'");
        if (when.text != "when")
            fail(when.span, ParseErrorKind::Syntax, "expected 'when', found '" + when.text + "'");
        t.guard = p.expression(t.guard_vars);
        if (!p.at_end()) {
            const Token& emit = p.peek();
            if (emit.kind != Tok::Ident || emit.text != "emit")
                fail(emit.span, ParseErrorKind::Syntax, "expected an operator or 'emit', found '" + emit.text + "'");
            p.next();
            t.pulses = p.names_to_end();
            if (t.pulses.empty())
                fail(p.peek().span, ParseErrorKind::Syntax, "expected at least one pulse after 'emit'");
        }
        doc.transitions.push_back(std::move(t));
    } else {
        fail(kw.span, ParseErrorKind::Syntax, "unknown statement '" + keyword + "'");
    }
}

} // namespace

ParseResult parse_fsm(std::string_view text) {
    ParseResult result;
    auto& errors = result.errors;
    Document doc;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        try {
            auto toks = lex_line(line, line_no);
            if (toks.size() == 1)
                continue;
            LineParser p(std::move(toks));
            parse_line(p, doc, errors);
        } catch (const LineError& e) {
            errors.push_back(e.error);
        }
    }

    // Name resolution, after every line so declarations may follow uses.
    auto err = [&](const SourceSpan& span, ParseErrorKind kind, std::string msg) {
        errors.push_back({span, kind, std::move(msg)});
    };

    if (!doc.header)
        err({1, 1, 1}, ParseErrorKind::Syntax, "missing fsm header");

    std::map<std::string, int> signal_kind; // 0 input, 1 output, 2 pulse
    auto declare = [&](std::vector<NameRef>& list, int kind) {
        std::vector<NameRef> kept;
        for (auto& n : list) {
            if (!signal_kind.emplace(n.name, kind).second) {
                err(n.span, ParseErrorKind::DuplicateName, "signal '" + n.name + "' declared twice");
                continue;
            }
            kept.push_back(std::move(n));
        }
        list = std::move(kept);
    };
    declare(doc.inputs, 0);
    declare(doc.outputs, 1);
    declare(doc.pulses, 2);

    std::set<std::string> state_names;
    for (const auto& st : doc.states)
        if (!state_names.insert(st.name.name).second)
            err(st.name.span, ParseErrorKind::DuplicateName, "state '" + st.name.name + "' declared twice");

    auto require_signal = [&](const NameRef& n, int kind, const char* what) {
        auto it = signal_kind.find(n.name);
        if (it == signal_kind.end() || it->second != kind)
            err(n.span, ParseErrorKind::UnknownSignal, std::string("unknown ") + what + " '" + n.name + "'");
    };
    auto require_state = [&](const NameRef& n) {
        if (!state_names.count(n.name))
            err(n.span, ParseErrorKind::UnknownSignal, "unknown state '" + n.name + "'");
    };

    if (!doc.initial) {
        const SourceSpan at = doc.header ? doc.header->span : SourceSpan{1, 1, 1};
        if (!doc.states.empty() || doc.header)
            err(at, ParseErrorKind::Syntax, "missing initial state declaration");
    } else {
        require_state(*doc.initial);
    }
    if (doc.reset)
        require_signal(*doc.reset, 0, "reset input");
    for (const auto& st : doc.states)
        for (const auto& [out, bit] : st.assignments)
            require_signal(out, 1, "moore output");
    for (const auto& t : doc.transitions) {
        require_state(t.source);
        require_state(t.destination);
        for (const auto& v : t.guard_vars)
            require_signal(v, 0, "input");
        std::set<std::string> seen;
        for (const auto& pl : t.pulses) {
            require_signal(pl, 2, "pulse");
            if (!seen.insert(pl.name).second)
                err(pl.span, ParseErrorKind::DuplicateName, "pulse '" + pl.name + "' emitted twice");
        }
    }

    if (!errors.empty()) {
        std::stable_sort(errors.begin(), errors.end(), [](const ParseError& a, const ParseError& b) {
            return std::pair(a.span.line, a.span.column) < std::pair(b.span.line, b.span.column);
        });
        return result;
    }

    FsmSpec spec;
    spec.name = doc.header->name;
    auto names = [](const std::vector<NameRef>& refs) {
        std::vector<std::string> out;
        for (const auto& r : refs)
            out.push_back(r.name);
        return out;
    };
    spec.inputs = names(doc.inputs);
    spec.moore_outputs = names(doc.outputs);
    spec.pulse_outputs = names(doc.pulses);
    spec.initial_state = doc.initial->name;
    if (doc.reset)
        spec.reset_input = doc.reset->name;
    for (const auto& st : doc.states) {
        StateDef def{st.name.name, {}, {}};
        for (const auto& [out, bit] : st.assignments)
            def.moore_assignments[out.name] = bit;
        spec.states.push_back(std::move(def));
    }
    for (auto& t : doc.transitions) {
        Transition tr{t.guard, t.destination.name, {}};
        for (const auto& pl : t.pulses)
            tr.pulses.insert(pl.name);
        auto idx = *spec.state_index(t.source.name);
        spec.states[idx].transitions.push_back(std::move(tr));
    }
    result.spec = std::move(spec);
    return result;
}

std::string serialize_fsm(const FsmSpec& spec) {
    std::string out = "fsm " + spec.name + '\n';
    auto list = [&](const char* keyword, const std::vector<std::string>& names) {
        if (names.empty())
            return;
        out += keyword;
        for (const auto& n : names)
            out += ' ' + n;
        out += '\n';
    };
    list("inputs", spec.inputs);
    list("outputs", spec.moore_outputs);
    list("pulses", spec.pulse_outputs);
    out += "initial " + spec.initial_state + '\n';
    if (spec.reset_input)
        out += "reset " + *spec.reset_input + '\n';

    for (const auto& st : spec.states) {
        out += "state " + st.name + " {";
        // Declaration order first, then anything not declared (structurally invalid specs).
        std::set<std::string> written;
        for (const auto& name : spec.moore_outputs) {
            auto it = st.moore_assignments.find(name);
            if (it == st.moore_assignments.end())
                continue;
            out += ' ' + name + '=' + (it->second ? '1' : '0');
            written.insert(name);
        }
        for (const auto& [name, bit] : st.moore_assignments)
            if (!written.count(name))
                out += ' ' + name + '=' + (bit ? '1' : '0');
        out += " }\n";
    }
    for (const auto& st : spec.states) {
        for (const auto& t : st.transitions) {
            out += "trans " + st.name + " -> " + t.destination + " when " + render_guard(t.guard);
            if (!t.pulses.empty()) {
                out += " emit";
                for (const auto& p : t.pulses)
                    out += ' ' + p;
            }
            out += '\n';
        }
    }
    return out;
}

} // namespace fsmkit
