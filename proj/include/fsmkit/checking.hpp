#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fsmkit/fsm.hpp"

namespace fsmkit {

struct CompletionResult {
    Fsm machine;
    std::vector<Transition> added;  // synthetic self-loops
};

/// Fills every missing (state, input) cell with a self-loop emitting the
/// first output symbol in canonical order. Idempotent.
CompletionResult complete_inputs(const Fsm& m);

/// Keeps the first-listed transition of every nondeterministic cell.
Fsm resolve_nondeterminism(const Fsm& m);

struct CheckingSequence {
    Trace trace;
    int state_bound = 0;
    bool verified = false;
};

/// Searches for a complete DFSM with at most n states over m's alphabets that
/// is consistent with the trace yet not equivalent to m (one SAT call: a
/// free candidate machine, a trace-consistency unrolling and a
/// length-bounded divergence walk). Empty optional means the trace pins down
/// m among all such machines — it is a checking sequence.
std::optional<Fsm> verify_checking_sequence(const Fsm& m, const Trace& trace, int n);

/// Counterexample-guided construction: start from a randomized transition
/// tour, repeatedly verify, and on a counterexample N extend the trace with
/// an input continuation that distinguishes m from N at the current end
/// states; when no continuation exists, restart with a fresh tour. Returns
/// best-effort with verified=false when the budget runs out.
CheckingSequence build_checking_sequence(const Fsm& m, int n, double budget_seconds, std::uint64_t seed = 0);

}  // namespace fsmkit
