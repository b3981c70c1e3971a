#include <doctest.h>

#include <map>

#include "fsmkit/diff.hpp"
#include "fsmkit/random_gen.hpp"
#include "helpers.hpp"

using namespace fsmkit;
using testing::fig1;
using testing::fig1_output_mutant;

namespace {

// Per-cell comparison the slow way, counting evidences per kind.
std::map<FaultKind, int> brute_force_cell_counts(const Fsm& expected, const Fsm& observed) {
    std::map<FaultKind, int> counts;
    for (const auto& s : expected.states()) {
        for (const auto& x : expected.inputs()) {
            auto exp = expected.transitions_on(s, x);
            auto obs = observed.has_state(s) && observed.has_input(x) ? observed.transitions_on(s, x)
                                                                      : std::vector<Transition>{};
            if (exp.empty() && !obs.empty()) counts[FaultKind::AdditionalTransition] += static_cast<int>(obs.size());
            if (!exp.empty() && obs.empty()) counts[FaultKind::MissingTransition] += static_cast<int>(exp.size());
            if (exp.size() == 1 && !obs.empty()) {
                bool exact = false;
                for (const auto& o : obs) exact = exact || o == exp[0];
                if (exact) {
                    counts[FaultKind::AdditionalTransition] += static_cast<int>(obs.size()) - 1;
                } else {
                    if (obs[0].output != exp[0].output) counts[FaultKind::LocalOutput] += 1;
                    if (obs[0].tgt != exp[0].tgt) counts[FaultKind::Transfer] += 1;
                    counts[FaultKind::AdditionalTransition] += static_cast<int>(obs.size()) - 1;
                }
            }
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("identical machines have an empty diff") {
    const SyntacticDiff d = syntactic_diff(fig1(), fig1());
    CHECK(d.empty());
    CHECK(d.desired.empty());
    CHECK(d.undesired.empty());
}

TEST_CASE("an output mutant yields one local-output evidence with the right partition") {
    const SyntacticDiff d = syntactic_diff(fig1(), fig1_output_mutant());
    REQUIRE(d.evidences.size() == 1);
    CHECK(d.evidences[0].kind == FaultKind::LocalOutput);
    CHECK(*d.evidences[0].expected == Transition{"S4", "a", "1", "S1"});
    CHECK(*d.evidences[0].observed == Transition{"S4", "a", "0", "S1"});
    CHECK(d.desired == std::vector<Transition>{{"S4", "a", "1", "S1"}});
    CHECK(d.undesired == std::vector<Transition>{{"S4", "a", "0", "S1"}});
}

TEST_CASE("a removed transition yields one missing-transition evidence") {
    std::vector<Transition> smaller;
    const Fsm base_machine = fig1();
    for (const auto& t : base_machine.transitions()) {
        if (!(t.src == "S3" && t.input == "b")) smaller.push_back(t);
    }
    const Fsm observed(fig1().states(), "S1", fig1().inputs(), fig1().outputs(), smaller);
    const SyntacticDiff d = syntactic_diff(fig1(), observed);
    REQUIRE(d.evidences.size() == 1);
    CHECK(d.evidences[0].kind == FaultKind::MissingTransition);
    CHECK(*d.evidences[0].expected == Transition{"S3", "b", "0", "S4"});
    CHECK_FALSE(d.evidences[0].observed.has_value());
    CHECK(d.desired == std::vector<Transition>{{"S3", "b", "0", "S4"}});
    CHECK(d.undesired.empty());
}

TEST_CASE("a cell differing in output and target yields two evidences on the same pair") {
    std::vector<Transition> ts = fig1().transitions();
    for (auto& t : ts) {
        if (t.src == "S4" && t.input == "a") {
            t.output = "0";
            t.tgt = "S2";
        }
    }
    const Fsm observed(fig1().states(), "S1", fig1().inputs(), fig1().outputs(), ts);
    const SyntacticDiff d = syntactic_diff(fig1(), observed);
    CHECK(d.count(FaultKind::LocalOutput) == 1);
    CHECK(d.count(FaultKind::Transfer) == 1);
    CHECK(d.evidences.size() == 2);
}

TEST_CASE("deterministic complete pairs never show additional or missing kinds") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Fsm a = generate_oracle({4, 2, 2, seed});
        const Fsm b = generate_oracle({4, 2, 2, seed + 1000});
        const SyntacticDiff d = syntactic_diff(a, b);
        CHECK(d.count(FaultKind::AdditionalTransition) == 0);
        CHECK(d.count(FaultKind::MissingTransition) == 0);
    }
}

TEST_CASE("diff is a mirror image under argument swap") {
    Rng rng(77);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Fsm a = generate_oracle({5, 3, 2, seed});
        const Fsm b = inject_faults(
            a, {{FaultKind::LocalOutput, "S1", "a"}, {FaultKind::Transfer, "S2", "b"}, {FaultKind::MissingTransition, "S3", "c"}},
            rng);
        const SyntacticDiff ab = syntactic_diff(a, b);
        const SyntacticDiff ba = syntactic_diff(b, a);
        CHECK(ab.count(FaultKind::LocalOutput) == ba.count(FaultKind::LocalOutput));
        CHECK(ab.count(FaultKind::Transfer) == ba.count(FaultKind::Transfer));
        CHECK(ab.count(FaultKind::MissingTransition) == ba.count(FaultKind::AdditionalTransition));
        CHECK(ab.count(FaultKind::AdditionalTransition) == ba.count(FaultKind::MissingTransition));
        CHECK(ab.desired == ba.undesired);
        CHECK(ab.undesired == ba.desired);
    }
}

TEST_CASE("injected recipes are recovered exactly, for every fault type") {
    Rng rng(202);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Fsm oracle = generate_oracle({6, 3, 2, seed});
        const std::vector<FaultSpot> recipe{
            {FaultKind::LocalOutput, "S1", "a"},
            {FaultKind::Transfer, "S2", "b"},
            {FaultKind::MissingTransition, "S4", "c"},
            {FaultKind::AdditionalTransition, "S5", "a"},
        };
        const Fsm observed = inject_faults(oracle, recipe, rng);
        CHECK_FALSE(observed.is_deterministic());  // the additional fault duplicates a cell

        const SyntacticDiff d = syntactic_diff(oracle, observed);
        CHECK(d.count(FaultKind::LocalOutput) == 1);
        CHECK(d.count(FaultKind::Transfer) == 1);
        CHECK(d.count(FaultKind::MissingTransition) == 1);
        CHECK(d.count(FaultKind::AdditionalTransition) == 1);
        CHECK(d.evidences.size() == 4);
    }
}

TEST_CASE("empty recipe means empty diff") {
    Rng rng(3);
    const Fsm m = generate_oracle({5, 2, 2, 1});
    CHECK(syntactic_diff(m, inject_faults(m, {}, rng)).empty());
}

TEST_CASE("evidences agree with a brute-force per-cell comparison") {
    Rng rng(11);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Fsm a = generate_oracle({8, 3, 2, seed});
        const Fsm b = inject_faults(a,
                                    {{FaultKind::LocalOutput, "S2", "a"},
                                     {FaultKind::Transfer, "S5", "b"},
                                     {FaultKind::AdditionalTransition, "S7", "c"}},
                                    rng);
        const SyntacticDiff d = syntactic_diff(a, b);
        const auto expected_counts = brute_force_cell_counts(a, b);
        for (const auto kind : {FaultKind::AdditionalTransition, FaultKind::MissingTransition, FaultKind::LocalOutput,
                                FaultKind::Transfer}) {
            const auto it = expected_counts.find(kind);
            CHECK(d.count(kind) == static_cast<std::size_t>(it == expected_counts.end() ? 0 : it->second));
        }
    }
}

TEST_CASE("recipes that would strand a state are rejected") {
    const Fsm m({"S1", "S2"}, "S1", {"a"}, {"0"},
                {{"S1", "a", "0", "S1"}, {"S2", "a", "0", "S2"}});
    Rng rng(1);
    CHECK_THROWS_AS(inject_faults(m, {{FaultKind::MissingTransition, "S2", "a"}}, rng), DomainError);
}

TEST_CASE("recipes touching one cell twice or naming unknown cells are rejected") {
    Rng rng(1);
    const Fsm m = fig1();
    CHECK_THROWS_AS(
        inject_faults(m, {{FaultKind::LocalOutput, "S1", "a"}, {FaultKind::Transfer, "S1", "a"}}, rng), DomainError);
    CHECK_THROWS_AS(inject_faults(m, {{FaultKind::LocalOutput, "S9", "a"}}, rng), DomainError);
    CHECK_THROWS_AS(inject_faults(m, {{FaultKind::LocalOutput, "S1", "z"}}, rng), DomainError);
}

TEST_CASE("state-set mismatch is reported, not thrown") {
    const Fsm small({"S1"}, "S1", {"a"}, {"0"}, {{"S1", "a", "0", "S1"}});
    const SyntacticDiff d = syntactic_diff(fig1(), small);
    CHECK(d.state_set_mismatch);
    CHECK_FALSE(d.empty());
}
