#pragma once

#include <string>
#include <vector>

#include "fsmkit/bignum.hpp"
#include "fsmkit/fsm.hpp"

namespace fsmkit {

struct FaultModel {
    /// For every present transition (s,x,y,t), add the variants (s,x,y',t).
    bool output_faults = false;
    /// For every empty (s,x) cell, add every (s,x,y,t) over outputs × states.
    bool missing_transition_faults = false;
    /// For every present transition (s,x,y,t), add the variants (s,x,y,t').
    /// Off by default; the observed LLM faults are covered by the two above.
    bool transfer_faults = false;
    std::vector<Transition> extra_transitions;

    bool enables_anything() const {
        return output_faults || missing_transition_faults || transfer_faults || !extra_transitions.empty();
    }
};

/// A nondeterministic machine whose per-cell transition choices span a finite
/// domain of candidate DFSMs (the repair domain). Every (state, input) cell is
/// nonempty, so every selection of one transition per cell is complete.
class MutationMachine {
public:
    /// Groups an already-built relation by cell; throws when a cell is empty.
    static MutationMachine from_fsm(const Fsm& base);

    const Fsm& base() const { return base_; }
    const std::vector<std::vector<Transition>>& cells() const { return cells_; }
    std::size_t cell_index(const std::string& state, const std::string& input) const;

    BigUint domain_size() const;
    bool contains(const Fsm& m) const;

    /// The DFSM picking choice[i] from cell i.
    Fsm select(const std::vector<std::size_t>& choice) const;

private:
    MutationMachine(Fsm base, std::vector<std::vector<Transition>> cells)
        : base_(std::move(base)), cells_(std::move(cells)) {}

    Fsm base_;
    std::vector<std::vector<Transition>> cells_;  // states × inputs, row-major
    friend std::pair<MutationMachine, int> augment_with_oracle(const MutationMachine&, const Fsm&);
};

/// Grows the generated machine's relation by the fault model's mutants.
/// Throws DomainError when extra transitions reference unknown symbols or
/// when some cell stays empty (incomplete machine without missing-transition
/// faults enabled).
MutationMachine build_mutation_machine(const Fsm& generated, const FaultModel& fm);

/// Adds every oracle transition absent from the domain, so the oracle becomes
/// a member. Returns the augmented machine and the number of added
/// transitions. Throws DomainError when the state sets or alphabets differ.
std::pair<MutationMachine, int> augment_with_oracle(const MutationMachine& mm, const Fsm& oracle);

}  // namespace fsmkit
