#include <doctest.h>

#include "fsmkit/csv.hpp"
#include "fsmkit/nl.hpp"
#include "fsmkit/product.hpp"
#include "fsmkit/random_gen.hpp"
#include "fsmkit/repair.hpp"
#include "helpers.hpp"

#include <nlohmann/json.hpp>

using namespace fsmkit;
using testing::fig1;

namespace {

std::string description_of(const Fsm& m, std::uint64_t seed) {
    Rng rng(seed);
    return describe_fsm(m, rng);
}

SimulatorProfile single_output_fault_profile(std::uint64_t seed) {
    SimulatorProfile profile;
    profile.per_size[5] = FaultRates{{0.0, 0.0, 5.0, 0.0}, {0, 0, 1, 0}};
    profile.seed = seed;
    return profile;
}

void check_prompt_threading(const RepairOutcome& outcome) {
    for (std::size_t i = 1; i < outcome.history.size(); ++i) {
        CHECK(outcome.history[i].prompt.rfind(outcome.history[i - 1].prompt, 0) == 0);
        CHECK(outcome.history[i].prompt.size() > outcome.history[i - 1].prompt.size());
    }
}

/// Always returns the same machine, whatever the prompt says.
class FixedBackend : public Backend {
public:
    explicit FixedBackend(Fsm m) : machine_(std::move(m)) {}
    BackendResponse generate_fsm(const PromptMessage&) override {
        return parse_backend_text(serialize_csv(machine_));
    }
    const char* name() const override { return "fixed"; }

private:
    Fsm machine_;
};

/// Alternates between two machines by call parity.
class OscillatingBackend : public Backend {
public:
    OscillatingBackend(Fsm a, Fsm b) : a_(std::move(a)), b_(std::move(b)) {}
    BackendResponse generate_fsm(const PromptMessage&) override {
        ++calls_;
        return parse_backend_text(serialize_csv(calls_ % 2 == 1 ? a_ : b_));
    }
    const char* name() const override { return "oscillating"; }

private:
    Fsm a_, b_;
    int calls_ = 0;
};

}  // namespace

TEST_CASE("a perfect backend needs zero repair attempts on every driver") {
    const Fsm oracle = generate_oracle({5, 5, 2, 77});
    const std::string description = description_of(oracle, 77);
    RepairConfig cfg;
    cfg.seed = 77;

    PerfectBackend backend;
    const RepairOutcome syn = repair_syntactic(oracle, description, backend, cfg);
    CHECK(syn.success);
    CHECK(syn.attempts == 0);
    CHECK(syn.max_iter == 25);  // |S| * |A| = 5 * 5
    CHECK(syn.oracle_equivalent == true);

    const RepairOutcome dist = repair_dist_seq(oracle, description, backend, cfg);
    CHECK(dist.success);
    CHECK(dist.attempts == 0);

    OracleExpert expert(oracle);
    RepairConfig fast = cfg;
    fast.checkseq_budget_seconds = 30.0;
    const RepairOutcome chk = repair_check_seq(description, backend, expert, fast, &oracle);
    CHECK(chk.success);
    CHECK(chk.attempts == 0);
    CHECK(chk.oracle_equivalent == true);
    CHECK(chk.queries.size() == 1);
}

TEST_CASE("cooperative simulator fixes a single output fault in one syntactic attempt") {
    int nontrivial = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Fsm oracle = generate_oracle({5, 5, 2, seed});
        const std::string description = description_of(oracle, seed);
        SimulatorBackend backend(single_output_fault_profile(seed));
        RepairConfig cfg;
        cfg.seed = seed;
        const RepairOutcome outcome = repair_syntactic(oracle, description, backend, cfg);
        CHECK(outcome.success);
        CHECK(outcome.attempts <= 1);
        if (outcome.attempts == 1) ++nontrivial;
        check_prompt_threading(outcome);
        CHECK(outcome.oracle_equivalent == true);
    }
    CHECK(nontrivial >= 3);  // the profile injects a fault almost surely
}

TEST_CASE("a directive-ignoring simulator fails after exactly max_iter attempts") {
    const Fsm oracle = generate_oracle({5, 5, 2, 900});
    const std::string description = description_of(oracle, 900);
    SimulatorProfile profile = single_output_fault_profile(900);
    SimulatorBackend backend(profile, /*cooperative=*/false);
    RepairConfig cfg;
    cfg.seed = 900;
    const RepairOutcome outcome = repair_syntactic(oracle, description, backend, cfg);
    CHECK_FALSE(outcome.success);
    CHECK(outcome.attempts == 25);
    CHECK(outcome.max_iter == 25);
    CHECK(outcome.history.size() == 26);  // initial generation + 25 repair prompts
    check_prompt_threading(outcome);
    CHECK(outcome.revisits == 25);  // the same machine comes back every time
}

TEST_CASE("cooperative simulator repairs an output mutant from trace directives in one attempt") {
    for (std::uint64_t seed = 11; seed <= 15; ++seed) {
        const Fsm oracle = generate_oracle({5, 5, 2, seed});
        const std::string description = description_of(oracle, seed);
        SimulatorBackend backend(single_output_fault_profile(seed));
        RepairConfig cfg;
        cfg.seed = seed;
        const RepairOutcome outcome = repair_dist_seq(oracle, description, backend, cfg);
        CHECK(outcome.success);
        CHECK(outcome.attempts <= 1);
        check_prompt_threading(outcome);
        CHECK(outcome.oracle_equivalent == true);
    }
}

TEST_CASE("an oscillating backend is detected through revisits") {
    const Fsm oracle = fig1();
    Rng rng(4);
    const Fsm bad_a = inject_faults(oracle, {{FaultKind::LocalOutput, "S1", "a"}}, rng);
    const Fsm bad_b = inject_faults(oracle, {{FaultKind::LocalOutput, "S2", "b"}}, rng);
    OscillatingBackend backend(bad_a, bad_b);
    RepairConfig cfg;
    cfg.max_iter = 6;
    const RepairOutcome outcome = repair_dist_seq(oracle, description_of(oracle, 4), backend, cfg);
    CHECK_FALSE(outcome.success);
    CHECK(outcome.attempts == 6);
    CHECK(outcome.revisits >= 2);
}

TEST_CASE("checking-sequence repair succeeds within three attempts on output faults") {
    for (std::uint64_t seed = 21; seed <= 23; ++seed) {
        const Fsm oracle = generate_oracle({5, 2, 2, seed});
        const std::string description = description_of(oracle, seed);
        SimulatorProfile profile;
        profile.per_size[5] = FaultRates{{0.0, 0.0, 1.2, 0.0}, {0, 0, 2, 0}};
        profile.seed = seed;
        SimulatorBackend backend(profile);
        OracleExpert expert(oracle);
        RepairConfig cfg;
        cfg.seed = seed;
        cfg.checkseq_budget_seconds = 60.0;
        const RepairOutcome outcome = repair_check_seq(description, backend, expert, cfg, &oracle);
        CHECK(outcome.success);
        CHECK(outcome.attempts <= 3);
        CHECK(outcome.oracle_equivalent == true);
        CHECK_FALSE(outcome.low_confidence);
        check_prompt_threading(outcome);
    }
}

TEST_CASE("an expert echoing the generated machine's own outputs ends the loop vacuously") {
    const Fsm oracle = generate_oracle({5, 2, 2, 31});
    const std::string description = description_of(oracle, 31);
    SimulatorProfile profile;
    profile.per_size[5] = FaultRates{{0.0, 0.0, 9.0, 0.0}, {0, 0, 2, 0}};
    profile.seed = 31;

    // Recover the faulty machine the simulator will produce.
    SimulatorBackend probe(profile);
    const Fsm faulty = *probe.generate_fsm(build_generation_prompt(description)).machine;
    REQUIRE_FALSE(are_equivalent(Fsm(faulty.states(), faulty.initial(), oracle.inputs(), oracle.outputs(),
                                     faulty.transitions()),
                                 oracle));

    SimulatorBackend backend(profile);
    OracleExpert echo(faulty);  // answers with the machine's own outputs
    RepairConfig cfg;
    cfg.seed = 31;
    const RepairOutcome outcome = repair_check_seq(description, backend, echo, cfg, &oracle);
    CHECK(outcome.success);
    CHECK(outcome.attempts == 0);
    CHECK(outcome.oracle_equivalent == false);  // vacuous agreement, audited
}

TEST_CASE("fault-model repair mines the oracle back from simulated faults") {
    for (std::uint64_t seed = 41; seed <= 45; ++seed) {
        const Fsm oracle = generate_oracle({5, 5, 2, seed});
        const std::string description = description_of(oracle, seed);
        SimulatorProfile profile;
        profile.per_size[5] = FaultRates{{0.0, 0.8, 1.2, 0.0}, {0, 2, 2, 0}};
        profile.seed = seed;
        SimulatorBackend backend(profile);
        OracleExpert expert(oracle);
        RepairConfig cfg;
        cfg.seed = seed;
        cfg.fault_model.output_faults = true;
        cfg.fault_model.missing_transition_faults = true;
        const RepairOutcome outcome = repair_fault_model(description, backend, expert, cfg, &oracle);
        CHECK(outcome.success);
        CHECK(outcome.oracle_equivalent == true);
        CHECK(outcome.augmented_transitions == 0);  // output+missing faults stay inside the domain
        CHECK(outcome.queries.size() <= 50);
    }
}

TEST_CASE("fault-model repair reports failure when the domain cannot express the expert") {
    const Fsm base({"S1", "S2"}, "S1", {"a", "b"}, {"0", "1"},
                   {{"S1", "a", "0", "S1"},
                    {"S1", "b", "0", "S2"},
                    {"S2", "a", "0", "S2"},
                    {"S2", "b", "0", "S1"}});
    const Fsm outside({"S1", "S2"}, "S1", {"a", "b"}, {"0", "1"},
                      {{"S1", "a", "0", "S1"},
                       {"S1", "b", "1", "S2"},
                       {"S2", "a", "0", "S2"},
                       {"S2", "b", "0", "S1"}});
    FixedBackend backend(base);
    OracleExpert expert(outside);
    RepairConfig cfg;
    cfg.fault_model.extra_transitions.push_back({"S2", "a", "1", "S2"});
    const RepairOutcome outcome =
        repair_fault_model(description_of(base, 1), backend, expert, cfg, /*oracle=*/nullptr);
    CHECK_FALSE(outcome.success);
    CHECK(outcome.failure_reason.find("consistent") != std::string::npos);
}

TEST_CASE("unparsable backend text is reported as a failure with diagnostics") {
    struct GarbageBackend : Backend {
        BackendResponse generate_fsm(const PromptMessage&) override {
            return parse_backend_text("no machine here");
        }
        const char* kind() const { return "garbage"; }
        const char* name() const override { return "garbage"; }
    } backend;
    const Fsm oracle = fig1();
    const RepairOutcome outcome = repair_syntactic(oracle, description_of(oracle, 2), backend, {});
    CHECK_FALSE(outcome.success);
    CHECK(outcome.failure_reason.find("unparsable") != std::string::npos);
}

TEST_CASE("transcripts serialize every exchange and query") {
    const Fsm oracle = generate_oracle({5, 5, 2, 55});
    SimulatorBackend backend(single_output_fault_profile(55));
    RepairConfig cfg;
    cfg.seed = 55;
    const RepairOutcome outcome = repair_syntactic(oracle, description_of(oracle, 55), backend, cfg);
    const std::string text = outcome_to_json(outcome);
    const nlohmann::json doc = nlohmann::json::parse(text);
    CHECK(doc["strategy"] == "syntactic");
    CHECK(doc["success"] == outcome.success);
    CHECK(doc["history"].size() == outcome.history.size());
    CHECK(doc["attempts"] == outcome.attempts);
    CHECK(doc["max_iter"] == 25);
}

TEST_CASE("syntactic fragments carry the three directive sections verbatim") {
    const Fsm oracle = generate_oracle({5, 5, 2, 60});
    SimulatorBackend backend(single_output_fault_profile(60));
    RepairConfig cfg;
    cfg.seed = 60;
    const RepairOutcome outcome = repair_syntactic(oracle, description_of(oracle, 60), backend, cfg);
    REQUIRE(outcome.history.size() >= 2);
    const std::string& grown = outcome.history[1].prompt;
    CHECK(grown.find("Correct the automaton so that these transitions are present in the generated automaton:\n") !=
          std::string::npos);
    CHECK(grown.find("Correct the automaton so that these transitions are not present in the generated automaton:") !=
          std::string::npos);
    CHECK(grown.find("These transitions are correct and should be present in the generated automaton:\n") !=
          std::string::npos);
    CHECK(grown.find("S3,d,1,S0. Do not add any comments\n") != std::string::npos);
}
