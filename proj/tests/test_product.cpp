#include <doctest.h>

#include <set>

#include "fsmkit/product.hpp"
#include "fsmkit/random_gen.hpp"
#include "helpers.hpp"

using namespace fsmkit;
using testing::brute_force_equivalent;
using testing::fig1;
using testing::fig1_output_mutant;

TEST_CASE("product of a machine with itself never reaches the sink") {
    const auto aut = build_product(fig1(), fig1());
    CHECK_FALSE(aut.sink_reachable());
    CHECK(aut.pairs.size() <= 16);
}

TEST_CASE("the output mutant reaches the sink along the diagonal") {
    const auto aut = build_product(fig1(), fig1_output_mutant());
    CHECK(aut.sink_reachable());
    std::set<std::pair<std::string, std::string>> names;
    for (int p = 0; p < static_cast<int>(aut.pairs.size()); ++p) names.insert(aut.pair_names(p));
    CHECK(names == std::set<std::pair<std::string, std::string>>{
                       {"S1", "S1"}, {"S2", "S2"}, {"S3", "S3"}, {"S4", "S4"}});
}

TEST_CASE("machines differing everywhere edge to the sink from every pair") {
    std::vector<Transition> flipped;
    const Fsm base_machine = fig1();
    for (const auto& t : base_machine.transitions()) {
        flipped.push_back({t.src, t.input, t.output == "0" ? "1" : "0", t.tgt});
    }
    const Fsm other(fig1().states(), "S1", fig1().inputs(), fig1().outputs(), flipped);
    const auto aut = build_product(fig1(), other);
    for (int target : aut.edges) CHECK(target == DistinguishingAutomaton::kSink);
}

TEST_CASE("equivalence decisions") {
    CHECK(are_equivalent(fig1(), fig1()));
    CHECK_FALSE(are_equivalent(fig1(), fig1_output_mutant()));
    const Fsm renamed = rename_states(fig1(), {{"S1", "T1"}, {"S2", "T2"}, {"S3", "T3"}, {"S4", "T4"}});
    CHECK(are_equivalent(fig1(), renamed));
}

TEST_CASE("alphabet mismatch is a domain error") {
    const Fsm other({"S1"}, "S1", {"x"}, {"0"}, {{"S1", "x", "0", "S1"}});
    CHECK_THROWS_AS((void)build_product(fig1(), other), DomainError);
}

TEST_CASE("shortest distinguishing sequence for the output mutant is b a b a") {
    const auto seq = shortest_distinguishing_sequence(fig1(), fig1_output_mutant());
    REQUIRE(seq.has_value());
    CHECK(*seq == std::vector<std::string>{"b", "a", "b", "a"});
    CHECK_FALSE(shortest_distinguishing_sequence(fig1(), fig1()).has_value());
}

TEST_CASE("an immediate output difference gives a length-1 sequence") {
    std::vector<Transition> ts = fig1().transitions();
    for (auto& t : ts) {
        if (t.src == "S1" && t.input == "a") t.output = "1";
    }
    const Fsm other(fig1().states(), "S1", fig1().inputs(), fig1().outputs(), ts);
    const auto seq = shortest_distinguishing_sequence(fig1(), other);
    REQUIRE(seq.has_value());
    CHECK(seq->size() == 1);
    CHECK(*seq == std::vector<std::string>{"a"});
}

TEST_CASE("shortest sequences are minimal: the longest proper prefix does not distinguish") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Fsm a = generate_oracle({4, 2, 2, seed});
        const Fsm b = generate_oracle({4, 2, 2, seed + 555});
        const auto seq = shortest_distinguishing_sequence(a, b);
        if (!seq) continue;
        CHECK(a.run(*seq).trace.outputs != b.run(*seq).trace.outputs);
        const std::vector<std::string> prefix(seq->begin(), seq->end() - 1);
        CHECK(a.run(prefix).trace.outputs == b.run(prefix).trace.outputs);
    }
}

TEST_CASE("sampled sequences all reach the sink and include the shortest") {
    Rng rng(31);
    const auto sequences = sample_distinguishing_sequences(fig1(), fig1_output_mutant(), 3, rng);
    REQUIRE(!sequences.empty());
    CHECK(sequences.front() == std::vector<std::string>{"b", "a", "b", "a"});
    for (const auto& seq : sequences) {
        CHECK(fig1().run(seq).trace.outputs != fig1_output_mutant().run(seq).trace.outputs);
    }
    // Deduplicated.
    std::set<std::vector<std::string>> unique(sequences.begin(), sequences.end());
    CHECK(unique.size() == sequences.size());

    Rng rng2(32);
    CHECK(sample_distinguishing_sequences(fig1(), fig1(), 3, rng2).empty());
    Rng rng3(33);
    CHECK(sample_distinguishing_sequences(fig1(), fig1_output_mutant(), 1, rng3).size() == 1);
}

TEST_CASE("equivalence agrees with the brute-force oracle on random pairs") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Fsm a = generate_oracle({3 + static_cast<int>(seed % 2), 2, 2, seed});
        const Fsm b = generate_oracle({3 + static_cast<int>((seed + 1) % 2), 2, 2, seed + 999});
        const std::size_t bound = a.states().size() * b.states().size();
        CHECK(are_equivalent(a, b) == brute_force_equivalent(a, b, bound));
        ++checked;
    }
    CHECK(checked == 40);
    // And on guaranteed-equivalent pairs.
    const Fsm m = generate_oracle({4, 2, 2, 123});
    const Fsm renamed = rename_states(m, {{"S1", "Q1"}, {"S2", "Q2"}, {"S3", "Q3"}, {"S4", "Q4"}});
    CHECK(brute_force_equivalent(m, renamed, 16));
    CHECK(are_equivalent(m, renamed));
}

TEST_CASE("equivalence behaves like an equivalence relation on generated machines") {
    std::vector<Fsm> machines;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) machines.push_back(generate_oracle({3, 2, 2, seed}));
    for (const auto& a : machines) CHECK(are_equivalent(a, a));
    for (std::size_t i = 0; i < machines.size(); ++i) {
        for (std::size_t j = 0; j < machines.size(); ++j) {
            CHECK(are_equivalent(machines[i], machines[j]) == are_equivalent(machines[j], machines[i]));
        }
    }
    for (std::size_t i = 0; i < machines.size(); ++i) {
        for (std::size_t j = 0; j < machines.size(); ++j) {
            for (std::size_t k = 0; k < machines.size(); ++k) {
                if (are_equivalent(machines[i], machines[j]) && are_equivalent(machines[j], machines[k])) {
                    CHECK(are_equivalent(machines[i], machines[k]));
                }
            }
        }
    }
}
