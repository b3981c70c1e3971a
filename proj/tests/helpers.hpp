#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"

namespace fsmkit::testing {

/// The four-state running example: S1..S4 cycle on b (resp. a), all outputs 0
/// except a/1 from S4 back to S1.
inline Fsm fig1() {
    return Fsm({"S1", "S2", "S3", "S4"}, "S1", {"a", "b"}, {"0", "1"},
               {
                   {"S1", "a", "0", "S1"},
                   {"S1", "b", "0", "S2"},
                   {"S2", "b", "0", "S2"},
                   {"S2", "a", "0", "S3"},
                   {"S3", "a", "0", "S3"},
                   {"S3", "b", "0", "S4"},
                   {"S4", "b", "0", "S4"},
                   {"S4", "a", "1", "S1"},
               });
}

/// fig1 with the (S4, a) output flipped to 0 — a single local output fault.
inline Fsm fig1_output_mutant() {
    std::vector<Transition> ts = fig1().transitions();
    for (auto& t : ts) {
        if (t.src == "S4" && t.input == "a") t.output = "0";
    }
    return Fsm(fig1().states(), "S1", fig1().inputs(), fig1().outputs(), ts);
}

/// Independent equivalence oracle: depth-first lockstep walk over the input
/// tree up to max_len, returning false as soon as outputs diverge. Exercises
/// every input sequence of length <= max_len when the machines agree.
inline bool brute_force_equivalent(const Fsm& m1, const Fsm& m2, std::size_t max_len) {
    auto [d1, d2] = compile_shared(m1, m2);
    struct Frame {
        int s1, s2;
        std::size_t depth;
    };
    std::vector<Frame> stack{{d1.initial, d2.initial, 0}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == max_len) continue;
        for (int x = 0; x < d1.num_inputs; ++x) {
            if (d1.step_out(f.s1, x) != d2.step_out(f.s2, x)) return false;
            stack.push_back({d1.step_next(f.s1, x), d2.step_next(f.s2, x), f.depth + 1});
        }
    }
    return true;
}

/// All complete DFSMs with exactly n states over the given alphabets, initial
/// state fixed to the first one (relabeling covers the rest).
inline std::vector<Fsm> enumerate_complete_dfsms(int n, const std::vector<std::string>& inputs,
                                                 const std::vector<std::string>& outputs) {
    std::vector<std::string> states;
    for (int i = 1; i <= n; ++i) states.push_back("E" + std::to_string(i));
    const std::size_t cells = static_cast<std::size_t>(n) * inputs.size();
    const std::size_t options = static_cast<std::size_t>(n) * outputs.size();

    std::vector<Fsm> machines;
    std::vector<std::size_t> odometer(cells, 0);
    while (true) {
        std::vector<Transition> ts;
        ts.reserve(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            const std::size_t s = c / inputs.size();
            const std::size_t x = c % inputs.size();
            const std::size_t tgt = odometer[c] % static_cast<std::size_t>(n);
            const std::size_t y = odometer[c] / static_cast<std::size_t>(n);
            ts.push_back({states[s], inputs[x], outputs[y], states[tgt]});
        }
        machines.emplace_back(states, states[0], inputs, outputs, std::move(ts));
        std::size_t pos = 0;
        while (pos < cells) {
            if (++odometer[pos] < options) break;
            odometer[pos] = 0;
            ++pos;
        }
        if (pos == cells) break;
    }
    return machines;
}

/// Reachability check used by the generator tests.
inline bool all_states_reachable(const Fsm& m) {
    std::set<std::string> visited{m.initial()};
    std::deque<std::string> queue{m.initial()};
    while (!queue.empty()) {
        const std::string s = queue.front();
        queue.pop_front();
        for (const auto& t : m.transitions_from(s)) {
            if (visited.insert(t.tgt).second) queue.push_back(t.tgt);
        }
    }
    return visited.size() == m.states().size();
}

}  // namespace fsmkit::testing
