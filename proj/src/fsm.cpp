#include "fsmkit/fsm.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace fsmkit {

std::string to_string(const Transition& t) {
    return t.src + "," + t.input + "," + t.output + "," + t.tgt;
}

bool Execution::well_formed() const {
    if (steps.empty()) return true;
    if (steps.front().src != start) return false;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (steps[i].tgt != steps[i + 1].src) return false;
    }
    return true;
}

Trace Execution::trace() const {
    Trace tr;
    tr.inputs.reserve(steps.size());
    tr.outputs.reserve(steps.size());
    for (const auto& t : steps) {
        tr.inputs.push_back(t.input);
        tr.outputs.push_back(t.output);
    }
    return tr;
}

namespace {

void check_unique(const std::vector<std::string>& xs, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& x : xs) {
        if (x.empty()) throw DomainError(std::string(what) + " contains an empty symbol");
        if (!seen.insert(x).second) throw DomainError(std::string(what) + " contains duplicate \"" + x + "\"");
    }
}

}  // namespace

Fsm::Fsm(std::vector<std::string> states,
         std::string initial,
         std::vector<std::string> inputs,
         std::vector<std::string> outputs,
         std::vector<Transition> transitions)
    : states_(std::move(states)),
      initial_(std::move(initial)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      transitions_(std::move(transitions)) {
    check_unique(states_, "state set");
    check_unique(inputs_, "input alphabet");
    check_unique(outputs_, "output alphabet");

    for (const auto& x : inputs_) {
        if (std::find(outputs_.begin(), outputs_.end(), x) != outputs_.end()) {
            throw DomainError("input and output alphabets overlap on \"" + x + "\"");
        }
    }

    state_idx_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) state_idx_[states_[i]] = static_cast<int>(i);
    input_idx_.reserve(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i) input_idx_[inputs_[i]] = static_cast<int>(i);

    if (state_idx_.find(initial_) == state_idx_.end()) {
        throw DomainError("initial state \"" + initial_ + "\" is not a state");
    }

    std::unordered_set<std::string_view> output_set(outputs_.begin(), outputs_.end());
    cells_.assign(states_.size() * inputs_.size(), {});
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& t = transitions_[i];
        auto s = state_idx_.find(t.src);
        if (s == state_idx_.end()) throw DomainError("transition source \"" + t.src + "\" is not a state");
        auto g = state_idx_.find(t.tgt);
        if (g == state_idx_.end()) throw DomainError("transition target \"" + t.tgt + "\" is not a state");
        auto x = input_idx_.find(t.input);
        if (x == input_idx_.end()) throw DomainError("transition input \"" + t.input + "\" is not in the input alphabet");
        if (output_set.find(t.output) == output_set.end()) {
            throw DomainError("transition output \"" + t.output + "\" is not in the output alphabet");
        }
        cells_[static_cast<std::size_t>(s->second) * inputs_.size() + static_cast<std::size_t>(x->second)]
            .push_back(static_cast<int>(i));
    }
}

bool Fsm::has_state(std::string_view s) const { return state_idx_.find(std::string(s)) != state_idx_.end(); }
bool Fsm::has_input(std::string_view x) const { return input_idx_.find(std::string(x)) != input_idx_.end(); }
bool Fsm::has_output(std::string_view y) const {
    return std::find(outputs_.begin(), outputs_.end(), y) != outputs_.end();
}

int Fsm::state_index(std::string_view s) const {
    auto it = state_idx_.find(std::string(s));
    if (it == state_idx_.end()) throw DomainError("unknown state \"" + std::string(s) + "\"");
    return it->second;
}

int Fsm::input_index(std::string_view x) const {
    auto it = input_idx_.find(std::string(x));
    if (it == input_idx_.end()) throw DomainError("unknown input \"" + std::string(x) + "\"");
    return it->second;
}

std::vector<Transition> Fsm::transitions_from(const std::string& s) const {
    state_index(s);  // validate
    std::vector<Transition> result;
    for (const auto& t : transitions_) {
        if (t.src == s) result.push_back(t);
    }
    return result;
}

std::vector<Transition> Fsm::transitions_on(const std::string& s, const std::string& x) const {
    const std::size_t si = static_cast<std::size_t>(state_index(s));
    const std::size_t xi = static_cast<std::size_t>(input_index(x));
    std::vector<Transition> result;
    for (int ti : cells_[si * inputs_.size() + xi]) result.push_back(transitions_[static_cast<std::size_t>(ti)]);
    return result;
}

std::vector<Transition> Fsm::uncertain_transitions() const {
    std::vector<Transition> result;
    for (const auto& t : transitions_) {
        if (transitions_on(t.src, t.input).size() > 1) result.push_back(t);
    }
    return result;
}

bool Fsm::is_deterministic() const {
    for (const auto& cell : cells_) {
        if (cell.size() > 1) return false;
    }
    return true;
}

bool Fsm::is_complete() const {
    for (const auto& cell : cells_) {
        if (cell.empty()) return false;
    }
    return true;  // vacuously complete when the input alphabet is empty
}

RunResult Fsm::run(const std::vector<std::string>& input_seq) const {
    if (!is_deterministic()) {
        throw DomainError("run() requires a deterministic machine");
    }
    RunResult result;
    result.trace.inputs.reserve(input_seq.size());
    result.trace.outputs.reserve(input_seq.size());
    std::size_t cur = static_cast<std::size_t>(state_index(initial_));
    for (const auto& x : input_seq) {
        const std::size_t xi = static_cast<std::size_t>(input_index(x));
        const auto& cell = cells_[cur * inputs_.size() + xi];
        if (cell.empty()) {
            throw SimulationError("no transition from state \"" + states_[cur] + "\" on input \"" + x + "\"",
                                  states_[cur], x);
        }
        const Transition& t = transitions_[static_cast<std::size_t>(cell.front())];
        result.trace.inputs.push_back(t.input);
        result.trace.outputs.push_back(t.output);
        cur = static_cast<std::size_t>(state_index(t.tgt));
    }
    result.final_state = states_[cur];
    return result;
}

bool Fsm::operator==(const Fsm& other) const {
    if (initial_ != other.initial_) return false;
    auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
    if (as_set(states_) != as_set(other.states_)) return false;
    if (as_set(inputs_) != as_set(other.inputs_)) return false;
    if (as_set(outputs_) != as_set(other.outputs_)) return false;
    auto tr_set = [](const std::vector<Transition>& v) { return std::set<Transition>(v.begin(), v.end()); };
    return tr_set(transitions_) == tr_set(other.transitions_);
}

Fsm rename_states(const Fsm& m, const std::map<std::string, std::string>& mapping) {
    auto renamed = [&mapping](const std::string& s) {
        auto it = mapping.find(s);
        if (it == mapping.end()) throw DomainError("rename map misses state \"" + s + "\"");
        return it->second;
    };
    std::vector<std::string> states;
    states.reserve(m.states().size());
    for (const auto& s : m.states()) states.push_back(renamed(s));
    std::vector<Transition> transitions;
    transitions.reserve(m.transitions().size());
    for (const auto& t : m.transitions()) {
        transitions.push_back({renamed(t.src), t.input, t.output, renamed(t.tgt)});
    }
    return Fsm(std::move(states), renamed(m.initial()), m.inputs(), m.outputs(), std::move(transitions));
}

DenseFsm compile_dense(const Fsm& m) {
    if (!m.is_deterministic() || !m.is_complete()) {
        throw DomainError("dense compilation requires a deterministic complete machine");
    }
    DenseFsm d;
    d.num_states = static_cast<int>(m.states().size());
    d.num_inputs = static_cast<int>(m.inputs().size());
    d.states = m.states();
    d.inputs = m.inputs();
    d.outputs = m.outputs();
    d.initial = m.state_index(m.initial());

    std::unordered_map<std::string, int> out_idx;
    for (std::size_t i = 0; i < d.outputs.size(); ++i) out_idx[d.outputs[i]] = static_cast<int>(i);

    d.next.assign(static_cast<std::size_t>(d.num_states) * static_cast<std::size_t>(d.num_inputs), 0);
    d.out.assign(d.next.size(), 0);
    for (const auto& t : m.transitions()) {
        const std::size_t s = static_cast<std::size_t>(m.state_index(t.src));
        const std::size_t x = static_cast<std::size_t>(m.input_index(t.input));
        d.next[s * static_cast<std::size_t>(d.num_inputs) + x] = m.state_index(t.tgt);
        d.out[s * static_cast<std::size_t>(d.num_inputs) + x] = out_idx.at(t.output);
    }
    return d;
}

std::pair<DenseFsm, DenseFsm> compile_shared(const Fsm& m1, const Fsm& m2) {
    auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
    if (as_set(m1.inputs()) != as_set(m2.inputs())) {
        throw DomainError("machines use different input alphabets");
    }
    if (as_set(m1.outputs()) != as_set(m2.outputs())) {
        throw DomainError("machines use different output alphabets");
    }
    DenseFsm d1 = compile_dense(m1);

    // Recompile m2 against m1's alphabet ordering.
    std::unordered_map<std::string, int> in_idx, out_idx;
    for (std::size_t i = 0; i < d1.inputs.size(); ++i) in_idx[d1.inputs[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < d1.outputs.size(); ++i) out_idx[d1.outputs[i]] = static_cast<int>(i);

    if (!m2.is_deterministic() || !m2.is_complete()) {
        throw DomainError("dense compilation requires a deterministic complete machine");
    }
    DenseFsm d2;
    d2.num_states = static_cast<int>(m2.states().size());
    d2.num_inputs = d1.num_inputs;
    d2.states = m2.states();
    d2.inputs = d1.inputs;
    d2.outputs = d1.outputs;
    d2.initial = m2.state_index(m2.initial());
    d2.next.assign(static_cast<std::size_t>(d2.num_states) * static_cast<std::size_t>(d2.num_inputs), 0);
    d2.out.assign(d2.next.size(), 0);
    for (const auto& t : m2.transitions()) {
        const std::size_t s = static_cast<std::size_t>(m2.state_index(t.src));
        const std::size_t x = static_cast<std::size_t>(in_idx.at(t.input));
        d2.next[s * static_cast<std::size_t>(d2.num_inputs) + x] = m2.state_index(t.tgt);
        d2.out[s * static_cast<std::size_t>(d2.num_inputs) + x] = out_idx.at(t.output);
    }
    return {std::move(d1), std::move(d2)};
}

}  // namespace fsmkit
