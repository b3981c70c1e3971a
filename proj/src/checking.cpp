#include "fsmkit/checking.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>

#include "fsmkit/product.hpp"
#include "fsmkit/rng.hpp"
#include "fsmkit/sat.hpp"

namespace fsmkit {

CompletionResult complete_inputs(const Fsm& m) {
    if (!m.is_deterministic()) {
        throw DomainError("input completion requires a deterministic machine");
    }
    if (m.outputs().empty()) {
        throw DomainError("input completion needs at least one output symbol");
    }
    const std::string& default_output = m.outputs().front();
    std::vector<Transition> transitions = m.transitions();
    std::vector<Transition> added;
    for (const auto& s : m.states()) {
        for (const auto& x : m.inputs()) {
            if (m.transitions_on(s, x).empty()) {
                Transition t{s, x, default_output, s};
                transitions.push_back(t);
                added.push_back(std::move(t));
            }
        }
    }
    return {Fsm(m.states(), m.initial(), m.inputs(), m.outputs(), std::move(transitions)), std::move(added)};
}

Fsm resolve_nondeterminism(const Fsm& m) {
    std::set<std::pair<std::string, std::string>> taken;
    std::vector<Transition> kept;
    for (const auto& t : m.transitions()) {
        if (taken.insert({t.src, t.input}).second) kept.push_back(t);
    }
    return Fsm(m.states(), m.initial(), m.inputs(), m.outputs(), std::move(kept));
}

namespace {

struct CandidateVars {
    int n = 0;
    int num_inputs = 0;
    int num_outputs = 0;
    std::vector<int> next;  // [s][x][s'] one-hot
    std::vector<int> out;   // [s][x][y] one-hot
    int next_var(int s, int x, int t) const { return next[(s * num_inputs + x) * n + t]; }
    int out_var(int s, int x, int y) const { return out[(s * num_inputs + x) * num_outputs + y]; }
};

CandidateVars declare_candidate(sat::Cnf& cnf, int n, int num_inputs, int num_outputs) {
    CandidateVars vars;
    vars.n = n;
    vars.num_inputs = num_inputs;
    vars.num_outputs = num_outputs;
    vars.next.resize(static_cast<std::size_t>(n) * num_inputs * n);
    vars.out.resize(static_cast<std::size_t>(n) * num_inputs * num_outputs);
    for (auto& v : vars.next) v = cnf.new_var();
    for (auto& v : vars.out) v = cnf.new_var();
    for (int s = 0; s < n; ++s) {
        for (int x = 0; x < num_inputs; ++x) {
            std::vector<int> next_options, out_options;
            for (int t = 0; t < n; ++t) next_options.push_back(vars.next_var(s, x, t));
            for (int y = 0; y < num_outputs; ++y) out_options.push_back(vars.out_var(s, x, y));
            sat::exactly_one(cnf, next_options);
            sat::exactly_one(cnf, out_options);
        }
    }
    return vars;
}

}  // namespace

namespace {

std::optional<Fsm> verify_impl(const Fsm& m, const Trace& trace, int n, sat::Deadline deadline, bool& timed_out) {
    if (n < 1) throw DomainError("state bound must be positive");
    if (trace.inputs.size() != trace.outputs.size()) {
        throw DomainError("trace has mismatched input/output lengths");
    }
    const DenseFsm dense = compile_dense(m);
    const int num_inputs = dense.num_inputs;
    const int num_outputs = static_cast<int>(dense.outputs.size());

    std::vector<int> trace_in, trace_out;
    for (std::size_t i = 0; i < trace.inputs.size(); ++i) {
        auto xi = std::find(dense.inputs.begin(), dense.inputs.end(), trace.inputs[i]);
        auto yi = std::find(dense.outputs.begin(), dense.outputs.end(), trace.outputs[i]);
        if (xi == dense.inputs.end() || yi == dense.outputs.end()) {
            throw DomainError("trace uses symbols outside the machine's alphabets");
        }
        trace_in.push_back(static_cast<int>(xi - dense.inputs.begin()));
        trace_out.push_back(static_cast<int>(yi - dense.outputs.begin()));
    }

    sat::Cnf cnf;
    CandidateVars cand = declare_candidate(cnf, n, num_inputs, num_outputs);

    // Candidate consistency with the trace (candidate initial state is 0;
    // any machine can be relabeled so this loses no generality).
    {
        const std::size_t len = trace_in.size();
        std::vector<std::vector<int>> occ(len + 1, std::vector<int>(static_cast<std::size_t>(n)));
        for (auto& step : occ) {
            for (auto& v : step) v = cnf.new_var();
        }
        cnf.add_clause({occ[0][0]});
        for (std::size_t i = 0; i < len; ++i) {
            for (int s = 0; s < n; ++s) {
                cnf.add_clause({-occ[i][static_cast<std::size_t>(s)], cand.out_var(s, trace_in[i], trace_out[i])});
                for (int t = 0; t < n; ++t) {
                    cnf.add_clause({-occ[i][static_cast<std::size_t>(s)], -cand.next_var(s, trace_in[i], t),
                                    occ[i + 1][static_cast<std::size_t>(t)]});
                }
            }
        }

        // Symmetry breaking: number candidate states by first appearance
        // along the trace. appeared[i][s] tracks whether state s+1 showed up
        // by step i; state s+1 may only be entered after state s appeared.
        if (n > 2) {
            std::vector<std::vector<int>> appeared(len + 1, std::vector<int>(static_cast<std::size_t>(n) - 1));
            for (auto& step : appeared) {
                for (auto& v : step) v = cnf.new_var();
            }
            for (int s = 1; s < n; ++s) {
                const std::size_t si = static_cast<std::size_t>(s - 1);
                cnf.add_clause({-appeared[0][si], occ[0][static_cast<std::size_t>(s)]});
                cnf.add_clause({appeared[0][si], -occ[0][static_cast<std::size_t>(s)]});
                for (std::size_t i = 1; i <= len; ++i) {
                    cnf.add_clause({-appeared[i - 1][si], appeared[i][si]});
                    cnf.add_clause({-occ[i][static_cast<std::size_t>(s)], appeared[i][si]});
                    cnf.add_clause({-appeared[i][si], appeared[i - 1][si], occ[i][static_cast<std::size_t>(s)]});
                }
            }
            for (int s = 2; s < n; ++s) {
                const std::size_t prev = static_cast<std::size_t>(s - 2);
                cnf.add_clause({-occ[0][static_cast<std::size_t>(s)]});
                for (std::size_t i = 1; i <= len; ++i) {
                    cnf.add_clause({-occ[i][static_cast<std::size_t>(s)], appeared[i - 1][prev]});
                }
            }
        }
    }

    // Divergence walk: distinguishable machines with n and |S_m| states are
    // distinguished by some input sequence of length <= n + |S_m| - 1 (the
    // pair is a state pair of their disjoint union).
    {
        const int walk_len = n + dense.num_states - 1;
        std::vector<std::vector<int>> inp(static_cast<std::size_t>(walk_len),
                                          std::vector<int>(static_cast<std::size_t>(num_inputs)));
        std::vector<std::vector<int>> mocc(static_cast<std::size_t>(walk_len) + 1,
                                           std::vector<int>(static_cast<std::size_t>(dense.num_states)));
        std::vector<std::vector<int>> nocc(static_cast<std::size_t>(walk_len) + 1,
                                           std::vector<int>(static_cast<std::size_t>(n)));
        std::vector<int> diff(static_cast<std::size_t>(walk_len));
        for (auto& step : inp) {
            for (auto& v : step) v = cnf.new_var();
        }
        for (auto& step : mocc) {
            for (auto& v : step) v = cnf.new_var();
        }
        for (auto& step : nocc) {
            for (auto& v : step) v = cnf.new_var();
        }
        for (auto& v : diff) v = cnf.new_var();

        for (int j = 0; j < walk_len; ++j) {
            sat::exactly_one(cnf, inp[static_cast<std::size_t>(j)]);
        }
        cnf.add_clause({mocc[0][static_cast<std::size_t>(dense.initial)]});
        cnf.add_clause({nocc[0][0]});

        for (int j = 0; j < walk_len; ++j) {
            const std::size_t stepj = static_cast<std::size_t>(j);
            for (int x = 0; x < num_inputs; ++x) {
                for (int sm = 0; sm < dense.num_states; ++sm) {
                    cnf.add_clause({-inp[stepj][static_cast<std::size_t>(x)],
                                    -mocc[stepj][static_cast<std::size_t>(sm)],
                                    mocc[stepj + 1][static_cast<std::size_t>(dense.step_next(sm, x))]});
                }
                for (int sn = 0; sn < n; ++sn) {
                    for (int t = 0; t < n; ++t) {
                        cnf.add_clause({-inp[stepj][static_cast<std::size_t>(x)],
                                        -nocc[stepj][static_cast<std::size_t>(sn)], -cand.next_var(sn, x, t),
                                        nocc[stepj + 1][static_cast<std::size_t>(t)]});
                    }
                }
                for (int sm = 0; sm < dense.num_states; ++sm) {
                    for (int sn = 0; sn < n; ++sn) {
                        cnf.add_clause({-diff[stepj], -inp[stepj][static_cast<std::size_t>(x)],
                                        -mocc[stepj][static_cast<std::size_t>(sm)],
                                        -nocc[stepj][static_cast<std::size_t>(sn)],
                                        -cand.out_var(sn, x, dense.step_out(sm, x))});
                    }
                }
            }
        }
        sat::Clause some_diff;
        for (int v : diff) some_diff.push_back(v);
        cnf.add_clause(std::move(some_diff));
    }

    sat::Solver solver(cnf);
    const sat::SolveStatus status = solver.solve_limited(-1, deadline);
    if (status == sat::SolveStatus::Timeout) {
        timed_out = true;
        return std::nullopt;
    }
    if (status != sat::SolveStatus::Sat) return std::nullopt;

    // Decode the counterexample machine.
    std::vector<std::string> states;
    for (int s = 1; s <= n; ++s) states.push_back("C" + std::to_string(s));
    std::vector<Transition> transitions;
    for (int s = 0; s < n; ++s) {
        for (int x = 0; x < num_inputs; ++x) {
            int tgt = 0, yout = 0;
            for (int t = 0; t < n; ++t) {
                if (solver.value(cand.next_var(s, x, t))) tgt = t;
            }
            for (int y = 0; y < num_outputs; ++y) {
                if (solver.value(cand.out_var(s, x, y))) yout = y;
            }
            transitions.push_back({states[static_cast<std::size_t>(s)], dense.inputs[static_cast<std::size_t>(x)],
                                   dense.outputs[static_cast<std::size_t>(yout)],
                                   states[static_cast<std::size_t>(tgt)]});
        }
    }
    return Fsm(std::move(states), "C1", dense.inputs, dense.outputs, std::move(transitions));
}

}  // namespace

std::optional<Fsm> verify_checking_sequence(const Fsm& m, const Trace& trace, int n) {
    bool timed_out = false;
    return verify_impl(m, trace, n, std::nullopt, timed_out);
}

namespace {

// Randomized transition tour: repeatedly walk a shortest path to the nearest
// uncovered (state, input) cell and take it.
std::vector<std::string> random_transition_tour(const DenseFsm& dense, Rng& rng, int start) {
    const int k = dense.num_inputs;
    std::vector<bool> covered(static_cast<std::size_t>(dense.num_states) * static_cast<std::size_t>(k), false);
    std::size_t remaining = covered.size();
    std::vector<std::string> inputs;
    int current = start;

    while (remaining > 0) {
        // BFS over states from `current`.
        std::vector<int> dist(static_cast<std::size_t>(dense.num_states), -1);
        std::vector<int> parent(static_cast<std::size_t>(dense.num_states), -1);
        std::vector<int> via(static_cast<std::size_t>(dense.num_states), -1);
        std::deque<int> queue{current};
        dist[static_cast<std::size_t>(current)] = 0;
        while (!queue.empty()) {
            const int s = queue.front();
            queue.pop_front();
            for (int x = 0; x < k; ++x) {
                const int t = dense.step_next(s, x);
                if (dist[static_cast<std::size_t>(t)] == -1) {
                    dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(s)] + 1;
                    parent[static_cast<std::size_t>(t)] = s;
                    via[static_cast<std::size_t>(t)] = x;
                    queue.push_back(t);
                }
            }
        }
        // Nearest uncovered cells (complete machine: every state reachable
        // from anywhere is not guaranteed, but cells of unreachable states
        // can never be toured — they were covered... they cannot be; guard).
        int best = -1;
        std::vector<std::pair<int, int>> nearest;
        for (int s = 0; s < dense.num_states; ++s) {
            if (dist[static_cast<std::size_t>(s)] == -1) continue;
            for (int x = 0; x < k; ++x) {
                if (covered[static_cast<std::size_t>(s) * static_cast<std::size_t>(k) + static_cast<std::size_t>(x)]) {
                    continue;
                }
                if (best == -1 || dist[static_cast<std::size_t>(s)] < best) {
                    best = dist[static_cast<std::size_t>(s)];
                    nearest.clear();
                }
                if (dist[static_cast<std::size_t>(s)] == best) nearest.emplace_back(s, x);
            }
        }
        if (nearest.empty()) break;  // uncovered cells unreachable from here
        const auto [target_state, target_input] = nearest[rng.below(nearest.size())];

        std::vector<int> path;
        for (int s = target_state; s != current; s = parent[static_cast<std::size_t>(s)]) {
            path.push_back(via[static_cast<std::size_t>(s)]);
        }
        std::reverse(path.begin(), path.end());
        int walk_state = current;
        for (int x : path) {
            const std::size_t cell =
                static_cast<std::size_t>(walk_state) * static_cast<std::size_t>(k) + static_cast<std::size_t>(x);
            if (!covered[cell]) {
                covered[cell] = true;
                --remaining;
            }
            inputs.push_back(dense.inputs[static_cast<std::size_t>(x)]);
            walk_state = dense.step_next(walk_state, x);
        }
        const std::size_t cell = static_cast<std::size_t>(target_state) * static_cast<std::size_t>(k) +
                                 static_cast<std::size_t>(target_input);
        if (!covered[cell]) {
            covered[cell] = true;
            --remaining;
        }
        inputs.push_back(dense.inputs[static_cast<std::size_t>(target_input)]);
        current = dense.step_next(target_state, target_input);
    }
    return inputs;
}

}  // namespace

namespace {

// Runs m from `start` against the trace; returns the end state while the
// outputs agree, or nullopt at the first divergence.
std::optional<std::string> consistent_end_state(const Fsm& m, const std::string& start, const Trace& trace) {
    std::string cur = start;
    for (std::size_t i = 0; i < trace.inputs.size(); ++i) {
        const Transition t = m.transitions_on(cur, trace.inputs[i]).front();
        if (t.output != trace.outputs[i]) return std::nullopt;
        cur = t.tgt;
    }
    return cur;
}

// A wrong-start run that stays output-consistent and ends future-equivalent
// to the true run can never be excluded by extending the trace.
bool permanently_ambiguous_start(const Fsm& m, const Trace& trace) {
    const std::string true_end = m.run(trace.inputs).final_state;
    for (const auto& start : m.states()) {
        if (start == m.initial()) continue;
        const auto end = consistent_end_state(m, start, trace);
        if (end && !build_product(m, m, true_end, *end).sink_reachable()) return true;
    }
    return false;
}

// Shortest input sequence whose outputs from the initial state differ, at
// some position, from the outputs produced from every other start state —
// without any wrong start first converging onto the true run (a converged
// consistent rival can never be told apart later, so such branches are dead).
// BFS over (true state, set of alive rival states); absent when no such
// sequence exists, in which case the machine has no checking sequence at all:
// every trace stays consistent with some wrong-start copy of the machine.
std::optional<std::vector<std::string>> initial_identification_prefix(const Fsm& m) {
    const DenseFsm d = compile_dense(m);
    const int n = d.num_states;
    if (n > 30) throw DomainError("identification prefix search limited to 30 states");

    const std::uint32_t full = static_cast<std::uint32_t>((1ULL << n) - 1);
    const std::uint32_t start_mask = full & ~(1u << d.initial);
    struct Node {
        int true_state;
        std::uint32_t alive;
    };
    auto key = [n](const Node& node) { return (static_cast<std::uint64_t>(node.true_state) << n) | node.alive; };

    std::map<std::uint64_t, std::pair<std::uint64_t, int>> parent;  // key -> (parent key, input)
    std::deque<Node> queue{{d.initial, start_mask}};
    parent[key(queue.front())] = {key(queue.front()), -1};

    while (!queue.empty()) {
        const Node node = queue.front();
        queue.pop_front();
        if (node.alive == 0) {
            std::vector<std::string> inputs;
            std::uint64_t cur = key(node);
            while (parent.at(cur).second != -1) {
                inputs.push_back(d.inputs[static_cast<std::size_t>(parent.at(cur).second)]);
                cur = parent.at(cur).first;
            }
            std::reverse(inputs.begin(), inputs.end());
            return inputs;
        }
        for (int x = 0; x < d.num_inputs; ++x) {
            const int true_out = d.step_out(node.true_state, x);
            const int true_next = d.step_next(node.true_state, x);
            std::uint32_t alive = 0;
            for (int q = 0; q < n; ++q) {
                if (!(node.alive >> q & 1u)) continue;
                if (d.step_out(q, x) == true_out) alive |= 1u << d.step_next(q, x);
            }
            if (alive >> true_next & 1u) continue;  // a rival converged: dead branch
            const Node next{true_next, alive};
            if (parent.emplace(key(next), std::make_pair(key(node), x)).second) {
                queue.push_back(next);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

CheckingSequence build_checking_sequence(const Fsm& m, int n, double budget_seconds, std::uint64_t seed) {
    if (!m.is_deterministic() || !m.is_complete()) {
        throw DomainError("checking-sequence construction requires a deterministic complete machine");
    }
    if (n < static_cast<int>(m.states().size())) {
        throw DomainError("state bound below the machine's own state count");
    }
    const DenseFsm dense = compile_dense(m);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(budget_seconds));
    auto out_of_budget = [&deadline] { return std::chrono::steady_clock::now() >= deadline; };

    // A counterexample whose end state is future-equivalent to the subject's
    // survives every extension of the current trace, so such prefixes are
    // dead on arrival. Each restart draws a fresh identification prefix and
    // tour; the cheap wrong-start ambiguity test rejects dead prefixes before
    // any SAT work.
    constexpr int kMaxRestarts = 256;
    Rng rng(seed ^ 0x434b5345ULL);  // stream tag

    CheckingSequence best;
    best.state_bound = n;
    const std::optional<std::vector<std::string>> prefix = initial_identification_prefix(m);
    if (!prefix) {
        // Every trace stays consistent with a wrong-start copy of the
        // machine, so no checking sequence exists; report the best effort.
        best.trace = m.run(random_transition_tour(dense, rng, dense.initial)).trace;
        best.verified = false;
        return best;
    }
    for (int restart = 0; restart <= kMaxRestarts && !out_of_budget(); ++restart) {
        std::vector<std::string> inputs = *prefix;
        {
            // Tour from wherever the prefix ends.
            int after_prefix = dense.initial;
            for (const auto& x : inputs) {
                auto xi = std::find(dense.inputs.begin(), dense.inputs.end(), x);
                after_prefix = dense.step_next(after_prefix, static_cast<int>(xi - dense.inputs.begin()));
            }
            std::vector<std::string> tour = random_transition_tour(dense, rng, after_prefix);
            if (restart > 0) {
                const std::size_t excursion = rng.below(2 * static_cast<std::size_t>(dense.num_states) + 1);
                for (std::size_t i = 0; i < excursion; ++i) {
                    tour.push_back(dense.inputs[rng.below(dense.inputs.size())]);
                }
            }
            inputs.insert(inputs.end(), tour.begin(), tour.end());
        }
        Trace trace = m.run(inputs).trace;
        best.trace = trace;
        if (permanently_ambiguous_start(m, trace)) continue;

        while (!out_of_budget()) {
            bool timed_out = false;
            auto counterexample = verify_impl(m, trace, n, deadline, timed_out);
            if (timed_out) break;
            if (!counterexample) {
                best.trace = trace;
                best.verified = true;
                return best;
            }
            const std::string m_end = m.run(trace.inputs).final_state;
            const std::string c_end = counterexample->run(trace.inputs).final_state;
            auto candidates =
                sample_distinguishing_sequences(build_product(m, *counterexample, m_end, c_end), 4, rng);
            if (candidates.empty()) break;  // end states equivalent: tour again
            const auto& continuation = candidates[rng.below(candidates.size())];
            trace.inputs.insert(trace.inputs.end(), continuation.begin(), continuation.end());
            trace = m.run(trace.inputs).trace;
            best.trace = trace;
        }
    }
    best.verified = false;
    return best;
}

}  // namespace fsmkit
