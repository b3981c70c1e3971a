#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fsmkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violation of an operation's domain (unknown state, alphabet mismatch, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, int line = 0) : Error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Raised by run() when a deterministic machine has no transition for the
/// current (state, input).
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, std::string state, std::string input)
        : Error(what), state_(std::move(state)), input_(std::move(input)) {}
    const std::string& state() const { return state_; }
    const std::string& input() const { return input_; }

private:
    std::string state_;
    std::string input_;
};

struct Transition {
    std::string src;
    std::string input;
    std::string output;
    std::string tgt;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// "S1,a,0,S2" — the CSV row shape, also used in diagnostics.
std::string to_string(const Transition& t);

/// Equal-length input/output sequences.
struct Trace {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// A chained path of transitions starting in `start`.
struct Execution {
    std::string start;
    std::vector<Transition> steps;

    bool well_formed() const;
    Trace trace() const;
};

struct RunResult {
    Trace trace;
    std::string final_state;
};

/// A Mealy machine: states with an initial state, disjoint input/output
/// alphabets and a transition relation. Immutable after construction; every
/// ordered set keeps first-appearance order so iteration is deterministic.
///
/// The relation may be nondeterministic (several transitions sharing a
/// (state, input) cell); run() requires a deterministic complete machine.
class Fsm {
public:
    Fsm(std::vector<std::string> states,
        std::string initial,
        std::vector<std::string> inputs,
        std::vector<std::string> outputs,
        std::vector<Transition> transitions);

    const std::vector<std::string>& states() const { return states_; }
    const std::string& initial() const { return initial_; }
    const std::vector<std::string>& inputs() const { return inputs_; }
    const std::vector<std::string>& outputs() const { return outputs_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    bool has_state(std::string_view s) const;
    bool has_input(std::string_view x) const;
    bool has_output(std::string_view y) const;

    std::vector<Transition> transitions_from(const std::string& s) const;
    std::vector<Transition> transitions_on(const std::string& s, const std::string& x) const;

    /// Transitions sharing their (source, input) cell with another one.
    std::vector<Transition> uncertain_transitions() const;
    bool is_deterministic() const;
    bool is_complete() const;

    /// Response of a deterministic complete machine from the initial state.
    RunResult run(const std::vector<std::string>& input_seq) const;

    /// Set-based equality: same states, initial, alphabets and transition set,
    /// regardless of ordering.
    bool operator==(const Fsm& other) const;
    bool operator!=(const Fsm& other) const { return !(*this == other); }

    /// Position in states()/inputs(); throws DomainError for unknown symbols.
    int state_index(std::string_view s) const;
    int input_index(std::string_view x) const;

private:
    std::vector<std::string> states_;
    std::string initial_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::vector<Transition> transitions_;

    std::unordered_map<std::string, int> state_idx_;
    std::unordered_map<std::string, int> input_idx_;
    // cells_[s * |inputs| + x] holds indices into transitions_.
    std::vector<std::vector<int>> cells_;
};

/// Copy of `m` with states renamed through `mapping` (must be a bijection on
/// the state set).
Fsm rename_states(const Fsm& m, const std::map<std::string, std::string>& mapping);

/// Index-based view of a deterministic complete machine for tight loops.
struct DenseFsm {
    int num_states = 0;
    int num_inputs = 0;
    int initial = 0;
    std::vector<int> next;  // [s * num_inputs + x]
    std::vector<int> out;   // output index, same layout
    std::vector<std::string> states;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    int step_next(int s, int x) const { return next[s * num_inputs + x]; }
    int step_out(int s, int x) const { return out[s * num_inputs + x]; }
};

/// Requires a deterministic complete machine.
DenseFsm compile_dense(const Fsm& m);

/// Compile both machines against shared alphabet indexing (m1's order).
/// Throws DomainError when the input or output alphabets differ as sets.
std::pair<DenseFsm, DenseFsm> compile_shared(const Fsm& m1, const Fsm& m2);

}  // namespace fsmkit
