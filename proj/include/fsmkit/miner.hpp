#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmkit/expert.hpp"
#include "fsmkit/fsm.hpp"
#include "fsmkit/mutation.hpp"
#include "fsmkit/sat.hpp"

namespace fsmkit {

struct OutputQuery {
    std::vector<std::string> inputs;
    std::vector<std::string> answer;
    std::string source;
};

/// One selector variable per transition of the mutation machine, an
/// exactly-one constraint per cell, plus one trace-consistency unrolling per
/// recorded expert answer.
struct SelectionFormula {
    sat::Cnf cnf;
    std::vector<std::vector<int>> selectors;  // [cell][choice] -> variable
};

SelectionFormula build_selection_formula(const MutationMachine& mm);

/// Constrains the consistent selections to those whose induced DFSM answers
/// the query exactly: the machine is unrolled over the input sequence with
/// step-indexed state-occupancy variables, and selections enabling a
/// wrong-output transition from an occupied state are forbidden.
void add_trace_constraint(SelectionFormula& f, const MutationMachine& mm, const OutputQuery& query);

enum class MineStatus { Repaired, Failure, Exhausted };

struct MineResult {
    MineStatus status = MineStatus::Failure;
    std::optional<Fsm> machine;        // Repaired
    std::string failure_reason;        // Failure
    std::vector<Fsm> candidates;       // Exhausted: the last distinguishable pair
    std::vector<OutputQuery> queries;
    std::size_t max_query_length = 0;
};

/// |states| × |inputs| × |outputs| — the default query budget.
int default_max_queries(const MutationMachine& mm);

/// Iteratively solves for two behaviorally distinct consistent selections,
/// asks the expert a shortest distinguishing sequence for them and filters
/// the domain with the answer; returns the surviving behavior once all
/// consistent selections are equivalent. Failure when the formula goes
/// unsatisfiable, Exhausted when max_queries is hit.
MineResult mine(const MutationMachine& mm, Expert& expert, int max_queries);

/// Same accept/reject semantics by explicit enumeration; refuses domains
/// larger than `enumeration_budget`. Cross-validates mine().
MineResult brute_force_mine(const MutationMachine& mm, Expert& expert, int max_queries,
                            std::uint64_t enumeration_budget = 10000);

}  // namespace fsmkit
