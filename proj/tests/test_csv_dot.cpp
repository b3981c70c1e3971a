#include <doctest.h>

#include "fsmkit/csv.hpp"
#include "fsmkit/dot.hpp"
#include "fsmkit/random_gen.hpp"
#include "helpers.hpp"

using namespace fsmkit;
using testing::fig1;

TEST_CASE("single-row CSV parses with the first row's source as initial") {
    const ParsedCsv parsed = parse_csv("State,Input,Output,Next_State\nS0,a,0,S2");
    CHECK(parsed.machine.initial() == "S0");
    CHECK(parsed.machine.transitions().size() == 1);
    CHECK(parsed.machine.states() == std::vector<std::string>{"S0", "S2"});
    CHECK(parsed.warnings.empty());
}

TEST_CASE("serialize emits the canonical wire format") {
    const std::string text = serialize_csv(fig1());
    CHECK(text.rfind("State,Input,Output,Next_State\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);  // header + 8 data rows
    CHECK(text.find(' ') == std::string::npos);
    CHECK(parse_csv(text).machine == fig1());

    // Canonical round trip is byte-identical.
    CHECK(serialize_csv(parse_csv(text).machine) == text);
}

TEST_CASE("parse errors carry line numbers; lenient mode skips chatter") {
    try {
        parse_csv("State,Input,Output,Next_State\nS0,a,0,S1\nS1,b\n");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    CsvOptions lenient;
    lenient.lenient = true;
    const std::string noisy =
        "Sure, here is the automaton:\n```csv\nState,Input,Output,Next_State\nS0,a,0,S1\nnot a row\nS1,a,0,S0\n```\n";
    const ParsedCsv parsed = parse_csv(noisy, lenient);
    CHECK(parsed.machine.transitions().size() == 2);
    CHECK_THROWS_AS(parse_csv(noisy), ParseError);
}

TEST_CASE("code fences, blank lines and spacing are tolerated") {
    const ParsedCsv parsed = parse_csv("```\nState, Input, Output, Next_State\n\nS0, a, 0, S1\nS1 ,a, 1,S0\n```");
    CHECK(parsed.machine.transitions().size() == 2);
    CHECK(parsed.machine.transitions()[1] == Transition{"S1", "a", "1", "S0"});
}

TEST_CASE("exact duplicate rows are dropped with a warning") {
    const ParsedCsv parsed = parse_csv("State,Input,Output,Next_State\nS0,a,0,S1\nS0,a,0,S1\nS1,a,0,S0");
    CHECK(parsed.machine.transitions().size() == 2);
    REQUIRE(parsed.warnings.size() == 1);
    CHECK(parsed.warnings[0].find("S0,a,0,S1") != std::string::npos);
}

TEST_CASE("nondeterministic rows survive parsing") {
    const ParsedCsv parsed = parse_csv("State,Input,Output,Next_State\nS0,a,0,S1\nS0,a,1,S1");
    CHECK(parsed.machine.transitions().size() == 2);
    CHECK_FALSE(parsed.machine.is_deterministic());
}

TEST_CASE("expected alphabets pin the universes and reject strangers") {
    CsvOptions options;
    options.expected_inputs = std::vector<std::string>{"a", "b"};
    options.expected_outputs = std::vector<std::string>{"0", "1"};
    const ParsedCsv parsed = parse_csv("State,Input,Output,Next_State\nS0,a,0,S0", options);
    CHECK(parsed.machine.inputs() == std::vector<std::string>{"a", "b"});
    CHECK(parsed.machine.outputs() == std::vector<std::string>{"0", "1"});

    CHECK_THROWS_AS(parse_csv("State,Input,Output,Next_State\nS0,z,0,S0", options), ParseError);
}

TEST_CASE("CSV round trip equals the machine up to transition order") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Fsm m = generate_oracle({5, 3, 2, seed});
        CHECK(parse_csv(serialize_csv(m)).machine == m);
    }
}

TEST_CASE("DOT round trips the running example") {
    const Fsm m = fig1();
    const std::string text = serialize_dot(m);
    CHECK(parse_dot(text) == m);
    CHECK(serialize_dot(parse_dot(text)) == text);
}

TEST_CASE("DOT keeps states with no transitions") {
    const Fsm lonely({"S1"}, "S1", {}, {}, {});
    const std::string text = serialize_dot(lonely);
    const Fsm back = parse_dot(text);
    CHECK(back.states() == std::vector<std::string>{"S1"});
    CHECK(back.transitions().empty());
    CHECK(back.initial() == "S1");
}

TEST_CASE("DOT rejects malformed edge labels") {
    CHECK_THROWS_AS(parse_dot("digraph { __initial [shape=point]; __initial -> S1; S1 -> S1 [label=\"a-0\"]; }"),
                    ParseError);
    CHECK_THROWS_AS(parse_dot("digraph { S1 -> S1 [label=\"a/0\"]; }"), ParseError);  // no initial marker
}

TEST_CASE("DOT round trip over generated machines") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Fsm m = generate_oracle({4, 2, 2, seed});
        CHECK(parse_dot(serialize_dot(m)) == m);
    }
}
