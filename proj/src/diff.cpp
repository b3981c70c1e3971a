#include "fsmkit/diff.hpp"

#include <algorithm>
#include <set>

namespace fsmkit {

const char* to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::AdditionalTransition: return "additional_transition";
        case FaultKind::MissingTransition: return "missing_transition";
        case FaultKind::LocalOutput: return "local_output";
        case FaultKind::Transfer: return "transfer";
    }
    return "?";
}

std::size_t SyntacticDiff::count(FaultKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(evidences.begin(), evidences.end(), [kind](const FaultEvidence& e) { return e.kind == kind; }));
}

SyntacticDiff syntactic_diff(const Fsm& expected, const Fsm& observed) {
    SyntacticDiff diff;

    std::set<std::string> expected_states(expected.states().begin(), expected.states().end());
    std::set<std::string> observed_states(observed.states().begin(), observed.states().end());
    diff.state_set_mismatch = expected_states != observed_states;

    std::set<std::string> shared_inputs;
    for (const auto& x : expected.inputs()) {
        if (observed.has_input(x)) shared_inputs.insert(x);
    }

    auto note_desired = [&diff](const Transition& t) {
        if (std::find(diff.desired.begin(), diff.desired.end(), t) == diff.desired.end()) diff.desired.push_back(t);
    };
    auto note_undesired = [&diff](const Transition& t) {
        if (std::find(diff.undesired.begin(), diff.undesired.end(), t) == diff.undesired.end()) {
            diff.undesired.push_back(t);
        }
    };

    for (const auto& s : expected.states()) {
        if (!observed.has_state(s)) continue;
        for (const auto& x : expected.inputs()) {
            if (shared_inputs.find(x) == shared_inputs.end()) continue;
            std::vector<Transition> exp = expected.transitions_on(s, x);
            std::vector<Transition> obs = observed.transitions_on(s, x);

            if (exp.empty() && obs.empty()) continue;
            if (exp.empty()) {
                for (const auto& o : obs) {
                    diff.evidences.push_back({FaultKind::AdditionalTransition, std::nullopt, o});
                    note_undesired(o);
                }
                continue;
            }
            if (obs.empty()) {
                for (const auto& e : exp) {
                    diff.evidences.push_back({FaultKind::MissingTransition, e, std::nullopt});
                    note_desired(e);
                }
                continue;
            }

            // Exact matches pair off first; leftovers pair positionally and
            // yield local-output and/or transfer evidences; the surplus side
            // becomes additional/missing evidences.
            std::vector<Transition> exp_rest, obs_rest = obs;
            for (const auto& e : exp) {
                auto hit = std::find(obs_rest.begin(), obs_rest.end(), e);
                if (hit != obs_rest.end()) {
                    obs_rest.erase(hit);
                } else {
                    exp_rest.push_back(e);
                }
            }
            const std::size_t paired = std::min(exp_rest.size(), obs_rest.size());
            for (std::size_t i = 0; i < paired; ++i) {
                const Transition& e = exp_rest[i];
                const Transition& o = obs_rest[i];
                if (e.output != o.output) diff.evidences.push_back({FaultKind::LocalOutput, e, o});
                if (e.tgt != o.tgt) diff.evidences.push_back({FaultKind::Transfer, e, o});
                note_desired(e);
                note_undesired(o);
            }
            for (std::size_t i = paired; i < exp_rest.size(); ++i) {
                diff.evidences.push_back({FaultKind::MissingTransition, exp_rest[i], std::nullopt});
                note_desired(exp_rest[i]);
            }
            for (std::size_t i = paired; i < obs_rest.size(); ++i) {
                diff.evidences.push_back({FaultKind::AdditionalTransition, std::nullopt, obs_rest[i]});
                note_undesired(obs_rest[i]);
            }
        }
    }
    return diff;
}

Fsm inject_faults(const Fsm& m, const std::vector<FaultSpot>& recipe, Rng& rng) {
    if (!m.is_deterministic() || !m.is_complete()) {
        throw DomainError("fault injection requires a deterministic complete machine");
    }
    std::set<std::pair<std::string, std::string>> used_cells;
    for (const auto& spot : recipe) {
        if (!m.has_state(spot.state)) throw DomainError("fault recipe names unknown state \"" + spot.state + "\"");
        if (!m.has_input(spot.input)) throw DomainError("fault recipe names unknown input \"" + spot.input + "\"");
        if (!used_cells.insert({spot.state, spot.input}).second) {
            throw DomainError("fault recipe touches cell (" + spot.state + ", " + spot.input + ") twice");
        }
        if (spot.kind == FaultKind::LocalOutput && m.outputs().size() < 2) {
            throw DomainError("local output fault needs at least two output symbols");
        }
        if (spot.kind == FaultKind::Transfer && m.states().size() < 2) {
            throw DomainError("transfer fault needs at least two states");
        }
        if (spot.kind == FaultKind::AdditionalTransition && m.outputs().size() < 2 && m.states().size() < 2) {
            throw DomainError("additional transition fault needs a second output or state to differ in");
        }
    }

    std::vector<Transition> transitions = m.transitions();
    for (const auto& spot : recipe) {
        auto cell = std::find_if(transitions.begin(), transitions.end(), [&spot](const Transition& t) {
            return t.src == spot.state && t.input == spot.input;
        });
        switch (spot.kind) {
            case FaultKind::MissingTransition:
                transitions.erase(cell);
                break;
            case FaultKind::LocalOutput: {
                std::string other;
                do {
                    other = rng.pick(m.outputs());
                } while (other == cell->output);
                cell->output = other;
                break;
            }
            case FaultKind::Transfer: {
                std::string other;
                do {
                    other = rng.pick(m.states());
                } while (other == cell->tgt);
                cell->tgt = other;
                break;
            }
            case FaultKind::AdditionalTransition: {
                // Duplicate-input transition: differs from the original in
                // output, target or both, so the cell turns nondeterministic.
                Transition extra = *cell;
                const bool flip_output = m.outputs().size() >= 2 && (m.states().size() < 2 || rng.below(2) == 0);
                if (flip_output) {
                    std::string other;
                    do {
                        other = rng.pick(m.outputs());
                    } while (other == extra.output);
                    extra.output = other;
                } else {
                    std::string other;
                    do {
                        other = rng.pick(m.states());
                    } while (other == extra.tgt);
                    extra.tgt = other;
                }
                transitions.push_back(std::move(extra));
                break;
            }
        }
    }

    std::set<std::string> touched;
    for (const auto& t : transitions) {
        touched.insert(t.src);
        touched.insert(t.tgt);
    }
    for (const auto& s : m.states()) {
        if (touched.find(s) == touched.end()) {
            throw DomainError("fault recipe would strand state \"" + s + "\" (no incident transition left)");
        }
    }
    return Fsm(m.states(), m.initial(), m.inputs(), m.outputs(), std::move(transitions));
}

}  // namespace fsmkit
