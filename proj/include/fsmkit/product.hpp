#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

/// Reachable product of two deterministic complete machines over shared
/// inputs. A pair steps on x when both machines agree on the output; it edges
/// to the sink when the outputs differ, so input sequences reaching the sink
/// are exactly the distinguishing sequences.
struct DistinguishingAutomaton {
    static constexpr int kSink = -1;

    std::vector<std::pair<int, int>> pairs;  // (state index in m1, in m2); [0] is the initial pair
    std::vector<std::string> inputs;
    // edges[p * |inputs| + x]: target pair index, or kSink.
    std::vector<int> edges;
    std::vector<std::string> m1_states, m2_states;

    int initial_pair() const { return 0; }
    bool sink_reachable() const;
    std::pair<std::string, std::string> pair_names(int p) const {
        return {m1_states[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)].first)],
                m2_states[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)].second)]};
    }
};

/// Worklist construction from the machines' initial states (or the given
/// start states). Throws DomainError on alphabet mismatch or when a machine
/// is not deterministic and complete.
DistinguishingAutomaton build_product(const Fsm& m1, const Fsm& m2);
DistinguishingAutomaton build_product(const Fsm& m1, const Fsm& m2, const std::string& start1,
                                      const std::string& start2);

bool are_equivalent(const Fsm& m1, const Fsm& m2);

/// Shortest input sequence labeling a path from the initial pair to the sink;
/// ties broken lexicographically by input order. Empty optional when the
/// machines are equivalent.
std::optional<std::vector<std::string>> shortest_distinguishing_sequence(const Fsm& m1, const Fsm& m2);
std::optional<std::vector<std::string>> shortest_distinguishing_sequence(const DistinguishingAutomaton& aut);

/// Random walks to the sink (step cap 2·|pairs|, non-accepting walks
/// rejected), deduplicated, with the BFS-shortest sequence always included.
/// Empty when the machines are equivalent.
std::vector<std::vector<std::string>> sample_distinguishing_sequences(const Fsm& m1, const Fsm& m2, int count,
                                                                      Rng& rng);
std::vector<std::vector<std::string>> sample_distinguishing_sequences(const DistinguishingAutomaton& aut, int count,
                                                                      Rng& rng);

}  // namespace fsmkit
