#include "fsmkit/mutation.hpp"

#include <algorithm>
#include <set>

namespace fsmkit {

namespace {

Fsm relation_fsm(const Fsm& shape, std::vector<Transition> transitions) {
    return Fsm(shape.states(), shape.initial(), shape.inputs(), shape.outputs(), std::move(transitions));
}

std::vector<std::vector<Transition>> group_cells(const Fsm& base) {
    const std::size_t k = base.inputs().size();
    std::vector<std::vector<Transition>> cells(base.states().size() * k);
    for (std::size_t s = 0; s < base.states().size(); ++s) {
        for (std::size_t x = 0; x < k; ++x) {
            cells[s * k + x] = base.transitions_on(base.states()[s], base.inputs()[x]);
            if (cells[s * k + x].empty()) {
                throw DomainError("cell (" + base.states()[s] + ", " + base.inputs()[x] +
                                  ") is empty; the domain would contain no complete machine");
            }
        }
    }
    return cells;
}

}  // namespace

MutationMachine MutationMachine::from_fsm(const Fsm& base) { return MutationMachine(base, group_cells(base)); }

std::size_t MutationMachine::cell_index(const std::string& state, const std::string& input) const {
    const auto& states = base_.states();
    const auto& inputs = base_.inputs();
    auto s = std::find(states.begin(), states.end(), state);
    auto x = std::find(inputs.begin(), inputs.end(), input);
    if (s == states.end() || x == inputs.end()) {
        throw DomainError("unknown cell (" + state + ", " + input + ")");
    }
    return static_cast<std::size_t>(s - states.begin()) * inputs.size() +
           static_cast<std::size_t>(x - inputs.begin());
}

BigUint MutationMachine::domain_size() const {
    BigUint size(1);
    for (const auto& cell : cells_) size *= cell.size();
    return size;
}

bool MutationMachine::contains(const Fsm& m) const {
    if (!m.is_deterministic() || !m.is_complete()) return false;
    std::set<std::string> my_states(base_.states().begin(), base_.states().end());
    std::set<std::string> their_states(m.states().begin(), m.states().end());
    if (my_states != their_states || m.initial() != base_.initial()) return false;
    std::set<std::string> my_inputs(base_.inputs().begin(), base_.inputs().end());
    std::set<std::string> their_inputs(m.inputs().begin(), m.inputs().end());
    if (my_inputs != their_inputs) return false;
    for (const auto& t : m.transitions()) {
        const auto& cell = cells_[cell_index(t.src, t.input)];
        if (std::find(cell.begin(), cell.end(), t) == cell.end()) return false;
    }
    return true;
}

Fsm MutationMachine::select(const std::vector<std::size_t>& choice) const {
    if (choice.size() != cells_.size()) throw DomainError("selection size does not match cell count");
    std::vector<Transition> transitions;
    transitions.reserve(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        transitions.push_back(cells_[i].at(choice[i]));
    }
    return relation_fsm(base_, std::move(transitions));
}

MutationMachine build_mutation_machine(const Fsm& generated, const FaultModel& fm) {
    if (!fm.enables_anything()) {
        throw DomainError("fault model enables no mutation source and lists no extra transitions");
    }
    std::vector<Transition> relation = generated.transitions();
    std::set<Transition> present(relation.begin(), relation.end());
    auto add = [&relation, &present](Transition t) {
        if (present.insert(t).second) relation.push_back(std::move(t));
    };

    for (const auto& t : generated.transitions()) {
        if (fm.output_faults) {
            for (const auto& y : generated.outputs()) {
                if (y != t.output) add({t.src, t.input, y, t.tgt});
            }
        }
        if (fm.transfer_faults) {
            for (const auto& s : generated.states()) {
                if (s != t.tgt) add({t.src, t.input, t.output, s});
            }
        }
    }
    if (fm.missing_transition_faults) {
        for (const auto& s : generated.states()) {
            for (const auto& x : generated.inputs()) {
                if (generated.transitions_on(s, x).empty()) {
                    for (const auto& y : generated.outputs()) {
                        for (const auto& tgt : generated.states()) add({s, x, y, tgt});
                    }
                }
            }
        }
    }
    for (const auto& t : fm.extra_transitions) {
        if (!generated.has_state(t.src) || !generated.has_state(t.tgt)) {
            throw DomainError("extra transition " + to_string(t) + " references an unknown state");
        }
        if (!generated.has_input(t.input)) {
            throw DomainError("extra transition " + to_string(t) + " references an unknown input");
        }
        if (!generated.has_output(t.output)) {
            throw DomainError("extra transition " + to_string(t) + " references an unknown output");
        }
        add(t);
    }
    return MutationMachine::from_fsm(relation_fsm(generated, std::move(relation)));
}

std::pair<MutationMachine, int> augment_with_oracle(const MutationMachine& mm, const Fsm& oracle) {
    const Fsm& base = mm.base();
    std::set<std::string> base_states(base.states().begin(), base.states().end());
    std::set<std::string> oracle_states(oracle.states().begin(), oracle.states().end());
    if (base_states != oracle_states) {
        throw DomainError("oracle and repair domain use different state sets");
    }
    std::set<std::string> base_inputs(base.inputs().begin(), base.inputs().end());
    std::set<std::string> oracle_inputs(oracle.inputs().begin(), oracle.inputs().end());
    if (base_inputs != oracle_inputs) {
        throw DomainError("oracle and repair domain use different input alphabets");
    }

    // Output alphabets are unioned: when the generated machine never emits
    // some oracle output, the domain still has to be able to include the
    // oracle after augmentation.
    std::vector<std::string> outputs = base.outputs();
    for (const auto& y : oracle.outputs()) {
        if (std::find(outputs.begin(), outputs.end(), y) == outputs.end()) outputs.push_back(y);
    }

    std::vector<Transition> relation = base.transitions();
    std::set<Transition> present(relation.begin(), relation.end());
    int added = 0;
    for (const auto& t : oracle.transitions()) {
        if (present.insert(t).second) {
            relation.push_back(t);
            ++added;
        }
    }
    Fsm grown(base.states(), base.initial(), base.inputs(), std::move(outputs), std::move(relation));
    return {MutationMachine::from_fsm(std::move(grown)), added};
}

}  // namespace fsmkit
