#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsmkit/backend.hpp"
#include "fsmkit/expert.hpp"
#include "fsmkit/fsm.hpp"
#include "fsmkit/miner.hpp"
#include "fsmkit/mutation.hpp"

namespace fsmkit {

enum class RepairStrategy { Syntactic, DistSeq, CheckSeq, FaultModel };

const char* to_string(RepairStrategy strategy);
std::optional<RepairStrategy> repair_strategy_from_string(const std::string& name);

struct RepairConfig {
    /// Repair-attempt cap; 0 derives |S|·|X| from the oracle (or, without
    /// one, from the first generated machine).
    int max_iter = 0;
    /// CheckSeq state bound n; 0 derives from the oracle when known, else
    /// from the generated machine.
    int state_bound = 0;
    double checkseq_budget_seconds = 60.0;
    /// Distinguishing sequences per DistSeq attempt (the BFS-shortest one is
    /// always among them).
    int iseq_count = 3;
    /// Skip Listing the correct transitions in syntactic repair fragments
    /// (they bloat prompts for large machines).
    bool omit_conserve = false;
    FaultModel fault_model;
    int max_queries = 0;  // 0 derives |S|·|X|·|Y| from the repair domain
    std::uint64_t seed = 0;
};

/// One prompt/response exchange. Prompts grow monotonically: every entry's
/// user text is a prefix of the next one's.
struct RepairAttempt {
    std::string prompt;
    std::string response_text;
    bool parsed = false;
};

struct RepairOutcome {
    RepairStrategy strategy = RepairStrategy::Syntactic;
    bool success = false;
    int attempts = 0;  // repair prompts sent after the initial generation
    int max_iter = 0;
    std::optional<Fsm> machine;
    std::vector<RepairAttempt> history;
    std::vector<OutputQuery> queries;
    std::size_t max_query_length = 0;
    int revisits = 0;                // regenerated machines already seen before
    int augmented_transitions = 0;   // FaultModel: oracle transitions added to the domain
    bool low_confidence = false;     // an unverified checking sequence was used
    bool nondeterminism_resolved = false;
    std::string failure_reason;
    /// Audit result when an oracle machine was available.
    std::optional<bool> oracle_equivalent;
};

/// Iterative prompt refinement from syntactic diffs against the oracle;
/// stops on an empty diff or after max_iter attempts.
RepairOutcome repair_syntactic(const Fsm& oracle, const std::string& description, Backend& backend,
                               const RepairConfig& cfg);

/// Iterative prompt refinement from distinguishing input/output sequences;
/// stops on equivalence with the oracle or after max_iter attempts.
RepairOutcome repair_dist_seq(const Fsm& oracle, const std::string& description, Backend& backend,
                              const RepairConfig& cfg);

/// Checking-sequence repair: no oracle machine, only an expert answering
/// output queries. `oracle_for_audit`, when given, is used solely to record
/// the equivalence audit.
RepairOutcome repair_check_seq(const std::string& description, Backend& backend, Expert& expert,
                               const RepairConfig& cfg, const Fsm* oracle_for_audit = nullptr);

/// Fault-model repair: one generation, then SAT mining over the mutation
/// machine's repair domain — no further LLM prompting. When an oracle is
/// configured the domain is augmented to include it (added transitions are
/// counted).
RepairOutcome repair_fault_model(const std::string& description, Backend& backend, Expert& expert,
                                 const RepairConfig& cfg, const Fsm* oracle = nullptr);

/// Session transcript: prompts, responses, queries, answers and the outcome.
std::string outcome_to_json(const RepairOutcome& outcome);

}  // namespace fsmkit
