#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

/// The four syntactic fault types of the classic multiple-fault taxonomy.
enum class FaultKind {
    AdditionalTransition,  // type 1: observed has a transition the expected lacks
    MissingTransition,     // type 2: expected has a transition the observed lacks
    LocalOutput,           // type 3: same cell, different output
    Transfer,              // type 4: same cell, different target
};

const char* to_string(FaultKind kind);

struct FaultEvidence {
    FaultKind kind;
    std::optional<Transition> expected;  // present for Missing/LocalOutput/Transfer
    std::optional<Transition> observed;  // present for Additional/LocalOutput/Transfer

    friend bool operator==(const FaultEvidence&, const FaultEvidence&) = default;
};

/// Result of comparing an observed machine against the expected one over
/// name-matched states. `desired` collects expected-only transitions,
/// `undesired` observed-only ones.
struct SyntacticDiff {
    bool state_set_mismatch = false;
    std::vector<FaultEvidence> evidences;
    std::vector<Transition> desired;    // missing from the observed machine
    std::vector<Transition> undesired;  // present only in the observed machine

    bool empty() const { return !state_set_mismatch && evidences.empty(); }
    std::size_t count(FaultKind kind) const;
};

/// Per-cell comparison over shared states and inputs. When the state sets
/// differ, the mismatch is reported and only cells of shared states are
/// classified.
SyntacticDiff syntactic_diff(const Fsm& expected, const Fsm& observed);

struct FaultSpot {
    FaultKind kind;
    std::string state;
    std::string input;

    friend bool operator==(const FaultSpot&, const FaultSpot&) = default;
};

/// Applies a fault recipe to a deterministic complete machine; one spot per
/// (state, input) cell. The result keeps the state set (a recipe that would
/// leave a state untouched by any transition is rejected) and
/// syntactic_diff(m, result) recovers exactly the injected evidences.
Fsm inject_faults(const Fsm& m, const std::vector<FaultSpot>& recipe, Rng& rng);

}  // namespace fsmkit
