#include "fsmkit/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace fsmkit {

bool DistinguishingAutomaton::sink_reachable() const {
    return std::find(edges.begin(), edges.end(), kSink) != edges.end();
}

DistinguishingAutomaton build_product(const Fsm& m1, const Fsm& m2) {
    return build_product(m1, m2, m1.initial(), m2.initial());
}

DistinguishingAutomaton build_product(const Fsm& m1, const Fsm& m2, const std::string& start1,
                                       const std::string& start2) {
    auto [d1, d2] = compile_shared(m1, m2);

    auto index_of = [](const DenseFsm& d, const std::string& name) {
        auto it = std::find(d.states.begin(), d.states.end(), name);
        if (it == d.states.end()) throw DomainError("unknown start state \"" + name + "\"");
        return static_cast<int>(it - d.states.begin());
    };

    DistinguishingAutomaton aut;
    aut.inputs = d1.inputs;
    aut.m1_states = d1.states;
    aut.m2_states = d2.states;

    std::map<std::pair<int, int>, int> pair_index;
    std::deque<int> worklist;
    auto intern = [&](int s1, int s2) {
        auto [it, inserted] = pair_index.try_emplace({s1, s2}, static_cast<int>(aut.pairs.size()));
        if (inserted) {
            aut.pairs.emplace_back(s1, s2);
            aut.edges.resize(aut.pairs.size() * aut.inputs.size(), 0);
            worklist.push_back(it->second);
        }
        return it->second;
    };

    intern(index_of(d1, start1), index_of(d2, start2));
    const std::size_t k = aut.inputs.size();
    while (!worklist.empty()) {
        const int p = worklist.front();
        worklist.pop_front();
        const auto [s1, s2] = aut.pairs[static_cast<std::size_t>(p)];
        for (std::size_t x = 0; x < k; ++x) {
            const int xi = static_cast<int>(x);
            int target;
            if (d1.step_out(s1, xi) != d2.step_out(s2, xi)) {
                target = DistinguishingAutomaton::kSink;
            } else {
                target = intern(d1.step_next(s1, xi), d2.step_next(s2, xi));
            }
            aut.edges[static_cast<std::size_t>(p) * k + x] = target;
        }
    }
    return aut;
}

bool are_equivalent(const Fsm& m1, const Fsm& m2) { return !build_product(m1, m2).sink_reachable(); }

std::optional<std::vector<std::string>> shortest_distinguishing_sequence(const DistinguishingAutomaton& aut) {
    const std::size_t k = aut.inputs.size();
    std::vector<int> parent(aut.pairs.size(), -2);  // -2 = unvisited
    std::vector<int> via_input(aut.pairs.size(), -1);
    std::deque<int> queue;
    parent[0] = -1;
    queue.push_back(0);
    while (!queue.empty()) {
        const int p = queue.front();
        queue.pop_front();
        for (std::size_t x = 0; x < k; ++x) {
            const int target = aut.edges[static_cast<std::size_t>(p) * k + x];
            if (target == DistinguishingAutomaton::kSink) {
                std::vector<std::string> seq{aut.inputs[x]};
                for (int cur = p; parent[static_cast<std::size_t>(cur)] != -1;
                     cur = parent[static_cast<std::size_t>(cur)]) {
                    seq.push_back(aut.inputs[static_cast<std::size_t>(via_input[static_cast<std::size_t>(cur)])]);
                }
                std::reverse(seq.begin(), seq.end());
                return seq;
            }
            if (parent[static_cast<std::size_t>(target)] == -2) {
                parent[static_cast<std::size_t>(target)] = p;
                via_input[static_cast<std::size_t>(target)] = static_cast<int>(x);
                queue.push_back(target);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::vector<std::string>> shortest_distinguishing_sequence(const Fsm& m1, const Fsm& m2) {
    return shortest_distinguishing_sequence(build_product(m1, m2));
}

std::vector<std::vector<std::string>> sample_distinguishing_sequences(const Fsm& m1, const Fsm& m2, int count,
                                                                      Rng& rng) {
    return sample_distinguishing_sequences(build_product(m1, m2), count, rng);
}

std::vector<std::vector<std::string>> sample_distinguishing_sequences(const DistinguishingAutomaton& aut, int count,
                                                                      Rng& rng) {
    if (count < 1) throw DomainError("sample count must be at least 1");
    std::vector<std::vector<std::string>> result;
    auto shortest = shortest_distinguishing_sequence(aut);
    if (!shortest) return result;  // equivalent machines
    result.push_back(*shortest);

    std::set<std::vector<std::string>> seen(result.begin(), result.end());
    const std::size_t k = aut.inputs.size();
    const std::size_t step_cap = 2 * aut.pairs.size();
    const int max_walks = 50 * count;
    for (int walk = 0; walk < max_walks && static_cast<int>(result.size()) < count; ++walk) {
        std::vector<std::string> seq;
        int p = 0;
        for (std::size_t step = 0; step < step_cap; ++step) {
            const std::size_t x = rng.below(k);
            seq.push_back(aut.inputs[x]);
            const int target = aut.edges[static_cast<std::size_t>(p) * k + x];
            if (target == DistinguishingAutomaton::kSink) {
                if (seen.insert(seq).second) result.push_back(seq);
                break;
            }
            p = target;
        }
    }
    return result;
}

}  // namespace fsmkit
