#include <doctest.h>

#include "fsmkit/fsm.hpp"
#include "fsmkit/random_gen.hpp"
#include "fsmkit/rng.hpp"
#include "helpers.hpp"

using namespace fsmkit;
using testing::fig1;

TEST_CASE("transitions_from lists exactly the state's outgoing transitions") {
    const Fsm m = fig1();
    const auto from1 = m.transitions_from("S1");
    REQUIRE(from1.size() == 2);
    CHECK(from1[0] == Transition{"S1", "a", "0", "S1"});
    CHECK(from1[1] == Transition{"S1", "b", "0", "S2"});

    const auto from4 = m.transitions_from("S4");
    REQUIRE(from4.size() == 2);
    CHECK(from4[0] == Transition{"S4", "b", "0", "S4"});
    CHECK(from4[1] == Transition{"S4", "a", "1", "S1"});

    CHECK_THROWS_AS((void)m.transitions_from("S9"), DomainError);

    const Fsm loner({"S1"}, "S1", {"a"}, {"0"}, {});
    CHECK(loner.transitions_from("S1").empty());
}

TEST_CASE("transitions_on filters by input") {
    const Fsm m = fig1();
    const auto on = m.transitions_on("S1", "a");
    REQUIRE(on.size() == 1);
    CHECK(on[0] == Transition{"S1", "a", "0", "S1"});
    CHECK_THROWS_AS((void)m.transitions_on("S1", "z"), DomainError);

    // Duplicate-output mutant on (S1, a): both transitions become uncertain.
    auto ts = m.transitions();
    ts.push_back({"S1", "a", "1", "S1"});
    const Fsm mutant(m.states(), "S1", m.inputs(), m.outputs(), ts);
    CHECK(mutant.transitions_on("S1", "a").size() == 2);
    CHECK(mutant.uncertain_transitions().size() == 2);
    CHECK_FALSE(mutant.is_deterministic());

    // Removal empties the cell.
    std::vector<Transition> smaller;
    for (const auto& t : m.transitions()) {
        if (!(t.src == "S1" && t.input == "a")) smaller.push_back(t);
    }
    const Fsm removed(m.states(), "S1", m.inputs(), m.outputs(), smaller);
    CHECK(removed.transitions_on("S1", "a").empty());
}

TEST_CASE("determinism and completeness predicates") {
    const Fsm m = fig1();
    CHECK(m.is_deterministic());
    CHECK(m.is_complete());

    const Fsm single({"S1"}, "S1", {}, {}, {});
    CHECK(single.is_deterministic());
    CHECK(single.is_complete());  // vacuous: empty input alphabet

    std::vector<Transition> smaller;
    for (const auto& t : m.transitions()) {
        if (!(t.src == "S4" && t.input == "a")) smaller.push_back(t);
    }
    CHECK_FALSE(Fsm(m.states(), "S1", m.inputs(), m.outputs(), smaller).is_complete());
}

TEST_CASE("run produces the response and final state") {
    const Fsm m = fig1();
    const RunResult r = m.run({"b", "a", "b", "a"});
    CHECK(r.trace.outputs == std::vector<std::string>{"0", "0", "0", "1"});
    CHECK(r.final_state == "S1");

    const RunResult empty = m.run({});
    CHECK(empty.trace.inputs.empty());
    CHECK(empty.final_state == m.initial());

    const RunResult selfloop = m.run({"a", "a", "a"});
    CHECK(selfloop.trace.outputs == std::vector<std::string>{"0", "0", "0"});
    CHECK(selfloop.final_state == "S1");
}

TEST_CASE("run errors name the stuck cell and reject nondeterminism") {
    const Fsm m = fig1();
    std::vector<Transition> smaller;
    for (const auto& t : m.transitions()) {
        if (!(t.src == "S4" && t.input == "a")) smaller.push_back(t);
    }
    const Fsm incomplete(m.states(), "S1", m.inputs(), m.outputs(), smaller);
    try {
        incomplete.run({"b", "a", "b", "a"});
        FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
        CHECK(e.state() == "S4");
        CHECK(e.input() == "a");
    }

    auto ts = m.transitions();
    ts.push_back({"S1", "a", "1", "S2"});
    const Fsm nondet(m.states(), "S1", m.inputs(), m.outputs(), ts);
    CHECK_THROWS_AS((void)nondet.run({"a"}), DomainError);
}

TEST_CASE("construction validates the five-tuple") {
    CHECK_THROWS_AS(Fsm({"S1"}, "S2", {"a"}, {"0"}, {}), DomainError);              // initial not a state
    CHECK_THROWS_AS(Fsm({"S1"}, "S1", {"a"}, {"a"}, {}), DomainError);              // alphabets overlap
    CHECK_THROWS_AS(Fsm({"S1", "S1"}, "S1", {"a"}, {"0"}, {}), DomainError);        // duplicate state
    CHECK_THROWS_AS(Fsm({"S1"}, "S1", {"a"}, {"0"}, {{"S1", "a", "0", "S2"}}), DomainError);
    CHECK_THROWS_AS(Fsm({"S1"}, "S1", {"a"}, {"0"}, {{"S1", "x", "0", "S1"}}), DomainError);
    CHECK_THROWS_AS(Fsm({"S1"}, "S1", {"a"}, {"0"}, {{"S1", "a", "7", "S1"}}), DomainError);
}

TEST_CASE("execution chaining and trace projection") {
    Execution e{"S1", {{"S1", "b", "0", "S2"}, {"S2", "a", "0", "S3"}}};
    CHECK(e.well_formed());
    CHECK(e.trace().inputs == std::vector<std::string>{"b", "a"});
    CHECK(e.trace().outputs == std::vector<std::string>{"0", "0"});

    Execution broken{"S1", {{"S1", "b", "0", "S2"}, {"S3", "a", "0", "S3"}}};
    CHECK_FALSE(broken.well_formed());
}

TEST_CASE("structural invariants hold on generated machines") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Fsm m = generate_oracle({4, 3, 2, seed});
        CHECK(m.is_deterministic());
        CHECK(m.is_complete());
        CHECK(m.transitions().size() == m.states().size() * m.inputs().size());

        // transitions_from splits disjointly into the per-input cells.
        for (const auto& s : m.states()) {
            std::size_t total = 0;
            for (const auto& x : m.inputs()) total += m.transitions_on(s, x).size();
            CHECK(m.transitions_from(s).size() == total);
        }

        // run is prefix-monotone and length-preserving.
        Rng rng(seed);
        std::vector<std::string> seq;
        for (int i = 0; i < 8; ++i) seq.push_back(m.inputs()[rng.below(m.inputs().size())]);
        const auto full = m.run(seq).trace;
        CHECK(full.outputs.size() == seq.size());
        const std::vector<std::string> prefix(seq.begin(), seq.begin() + 4);
        const auto part = m.run(prefix).trace;
        CHECK(std::equal(part.outputs.begin(), part.outputs.end(), full.outputs.begin()));
    }
}

TEST_CASE("renaming states preserves structure") {
    const Fsm m = fig1();
    const Fsm renamed = rename_states(m, {{"S1", "T1"}, {"S2", "T2"}, {"S3", "T3"}, {"S4", "T4"}});
    CHECK(renamed.initial() == "T1");
    CHECK(renamed.transitions().size() == m.transitions().size());
    CHECK(renamed.run({"b", "a", "b", "a"}).trace.outputs == m.run({"b", "a", "b", "a"}).trace.outputs);
    CHECK_THROWS_AS(rename_states(m, {{"S1", "T1"}}), DomainError);
}
