#pragma once

#include <cstdint>

#include "fsmkit/fsm.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

struct GenSpec {
    int num_states = 1;
    int num_inputs = 1;
    int num_outputs = 1;
    std::uint64_t seed = 0;
};

/// Symbol conventions used by generated machines: states S1..Sn, inputs
/// a, b, c, ... and outputs 0, 1, ...
std::vector<std::string> default_input_symbols(int count);
std::vector<std::string> default_output_symbols(int count);

/// Seeded generation of a deterministic, complete, initially-connected
/// machine: a random spanning arborescence makes every state reachable, then
/// the remaining (state, input) cells are filled uniformly. Identical
/// (spec, seed) pairs produce identical machines.
Fsm generate_oracle(const GenSpec& spec);

}  // namespace fsmkit
