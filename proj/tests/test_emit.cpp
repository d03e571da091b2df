#include "fsmkit/emit.hpp"
#include "fsmkit/errors.hpp"
#include "fsmkit/itlc.hpp"
#include "support.hpp"

#include <doctest.h>

#include <regex>
#include <set>

using namespace fsmkit;
using fsmkit::testing::MachineGenerator;

namespace {

std::vector<std::string> port_names(const std::string& verilog) {
    const auto open = verilog.find('(');
    const auto close = verilog.find(");");
    const std::string header = verilog.substr(open, close - open);
    std::vector<std::string> out;
    static const std::regex port(R"((?:input|output)\s+(?:wire|reg)\s+(\w+))");
    for (auto it = std::sregex_iterator(header.begin(), header.end(), port); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

std::vector<std::string> state_constants(const std::string& verilog) {
    std::vector<std::string> out;
    static const std::regex lp(R"(localparam (?:\[\d+:0\] )?\w+ = (\d+'b[01]+);)");
    for (auto it = std::sregex_iterator(verilog.begin(), verilog.end(), lp); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

} // namespace

TEST_SUITE("emit") {

TEST_CASE("controller verilog matches the golden file") {
    const auto text = emit_verilog(itlc::bundled_spec(), {});
    CHECK(text == testing::read_text(testing::source_path("golden/itlc.v")));
    CHECK(text == emit_verilog(itlc::bundled_spec(), {}));
}

TEST_CASE("binary and one-hot share ports, differ in register width") {
    const auto binary = emit_verilog(itlc::bundled_spec(), {StateEncoding::Binary, ""});
    const auto onehot = emit_verilog(itlc::bundled_spec(), {StateEncoding::OneHot, ""});
    CHECK(port_names(binary) == port_names(onehot));
    CHECK(binary.find("reg [1:0] state = S0;") != std::string::npos);
    CHECK(onehot.find("reg [3:0] state = S0;") != std::string::npos);
    CHECK(state_constants(onehot) == std::vector<std::string>{"4'b0001", "4'b0010", "4'b0100", "4'b1000"});
    CHECK(state_register_width(4, StateEncoding::Binary) == 2);
    CHECK(state_register_width(5, StateEncoding::Binary) == 3);
    CHECK(state_register_width(1, StateEncoding::Binary) == 1);
    CHECK(state_register_width(4, StateEncoding::OneHot) == 4);
}

TEST_CASE("single-state constant machine") {
    FsmSpec m;
    m.name = "hold";
    m.inputs = {"a"};
    m.moore_outputs = {"hi", "lo"};
    m.states = {{"Only", {{"hi", true}}, {{Guard::constant(true), "Only", {}}}}};
    m.initial_state = "Only";
    const auto v = emit_verilog(m, {});
    CHECK(v.find("localparam Only = 1'b0;") != std::string::npos);
    CHECK(v.find("next_state = Only;") != std::string::npos);
    CHECK(v.find("assign hi = 1'b1;") != std::string::npos);
    CHECK(v.find("assign lo = 1'b0;") != std::string::npos);
    CHECK(v.find("reset") == std::string::npos);
    CHECK(port_names(v) == std::vector<std::string>{"clk", "a", "hi", "lo"});
}

TEST_CASE("module name override") {
    const auto v = emit_verilog(itlc::bundled_spec(), {StateEncoding::Binary, "tlc_top"});
    CHECK(v.find("module tlc_top (") != std::string::npos);
}

TEST_CASE("port completeness and encoding soundness on random machines") {
    MachineGenerator gen(8);
    for (int i = 0; i < 60; ++i) {
        const auto spec = gen.machine();
        for (auto enc : {StateEncoding::Binary, StateEncoding::OneHot}) {
            const auto v = emit_verilog(spec, {enc, ""});
            std::vector<std::string> expected{"clk"};
            for (const auto* list : {&spec.inputs, &spec.moore_outputs, &spec.pulse_outputs})
                expected.insert(expected.end(), list->begin(), list->end());
            CHECK(port_names(v) == expected);
            const auto constants = state_constants(v);
            CHECK(constants.size() == spec.states.size());
            CHECK(std::set<std::string>(constants.begin(), constants.end()).size() == spec.states.size());
        }
    }
}

TEST_CASE("unusable names are listed") {
    FsmSpec bad;
    bad.name = "m";
    bad.inputs = {"clk", "wire"};
    bad.moore_outputs = {"state"};
    bad.states = {{"begin", {}, {{Guard::constant(true), "begin", {}}}}};
    bad.initial_state = "begin";
    try {
        (void)emit_verilog(bad, {});
        FAIL("expected EmitError");
    } catch (const EmitError& e) {
        CHECK(e.offenders() == std::vector<std::string>{"clk", "wire", "state", "begin"});
    }
    CHECK_THROWS_AS(emit_verilog(itlc::bundled_spec(), {StateEncoding::Binary, "9bad"}), EmitError);
}

TEST_CASE("emit_verilog refuses machines with findings") {
    auto spec = itlc::bundled_spec();
    spec.states[0].transitions.pop_back();
    CHECK_THROWS_AS(emit_verilog(spec, {}), ContractViolation);
}

TEST_CASE("ucf for the board mapping") {
    CHECK(emit_ucf(default_itlc_pins()) == "NET \"c\" LOC = \"N17\";\n"
                                           "NET \"ts\" LOC = \"H18\";\n"
                                           "NET \"tl\" LOC = \"L14\";\n"
                                           "NET \"mr\" LOC = \"F9\";\n"
                                           "NET \"my\" LOC = \"E9\";\n"
                                           "NET \"mg\" LOC = \"D11\";\n"
                                           "NET \"sr\" LOC = \"F11\";\n"
                                           "NET \"sy\" LOC = \"E11\";\n"
                                           "NET \"sg\" LOC = \"E12\";\n");
    CHECK(emit_ucf({}) == "");
    CHECK(emit_ucf({{{"c", "N17", PinKind::Input}}}) == "NET \"c\" LOC = \"N17\";\n");
    CHECK_NOTHROW(check_pins(default_itlc_pins(), itlc::bundled_spec()));
}

TEST_CASE("pin file parsing and checks") {
    const auto pins = parse_pins("# board\nc N17 input\n\nst K17 output  # push button\n");
    CHECK(pins == PinMap{{{"c", "N17", PinKind::Input}, {"st", "K17", PinKind::Output}}});
    CHECK_NOTHROW(check_pins(pins, itlc::bundled_spec()));
    CHECK_THROWS_AS(parse_pins("c N17"), ConfigError);
    CHECK_THROWS_AS(parse_pins("c N17 sideways"), ConfigError);
    CHECK_THROWS_AS(parse_pins("c N17 input\nc H18 input"), ConfigError);
    CHECK_THROWS_AS(check_pins(parse_pins("zz A1 input"), itlc::bundled_spec()), ConfigError);
    CHECK_THROWS_AS(check_pins(parse_pins("mg A1 input"), itlc::bundled_spec()), ConfigError);
}

} // TEST_SUITE
