#include "fsmkit/random_gen.hpp"

#include <string>

namespace fsmkit {

std::vector<std::string> default_input_symbols(int count) {
    std::vector<std::string> symbols;
    symbols.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (i < 26) {
            symbols.emplace_back(1, static_cast<char>('a' + i));
        } else {
            symbols.push_back("i" + std::to_string(i + 1));
        }
    }
    return symbols;
}

std::vector<std::string> default_output_symbols(int count) {
    std::vector<std::string> symbols;
    symbols.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) symbols.push_back(std::to_string(i));
    return symbols;
}

Fsm generate_oracle(const GenSpec& spec) {
    if (spec.num_states < 1 || spec.num_inputs < 1 || spec.num_outputs < 1) {
        throw DomainError("generation spec requires at least one state, input and output");
    }
    const std::size_t n = static_cast<std::size_t>(spec.num_states);
    const std::size_t k = static_cast<std::size_t>(spec.num_inputs);

    std::vector<std::string> states;
    states.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) states.push_back("S" + std::to_string(i));
    std::vector<std::string> inputs = default_input_symbols(spec.num_inputs);
    std::vector<std::string> outputs = default_output_symbols(spec.num_outputs);

    Rng rng(spec.seed);

    // cell_tgt[s*k + x] == -1 means unassigned.
    std::vector<int> cell_tgt(n * k, -1);
    std::vector<int> cell_out(n * k, -1);

    // Spanning arborescence: state i+1 hangs off a free cell of S1..Si.
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::size_t> free_cells;
        for (std::size_t cell = 0; cell < i * k; ++cell) {
            if (cell_tgt[cell] == -1) free_cells.push_back(cell);
        }
        const std::size_t cell = free_cells[rng.below(free_cells.size())];
        cell_tgt[cell] = static_cast<int>(i);
        cell_out[cell] = static_cast<int>(rng.below(outputs.size()));
    }

    for (std::size_t cell = 0; cell < n * k; ++cell) {
        if (cell_tgt[cell] == -1) {
            cell_tgt[cell] = static_cast<int>(rng.below(n));
            cell_out[cell] = static_cast<int>(rng.below(outputs.size()));
        }
    }

    std::vector<Transition> transitions;
    transitions.reserve(n * k);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t x = 0; x < k; ++x) {
            transitions.push_back({states[s], inputs[x], outputs[static_cast<std::size_t>(cell_out[s * k + x])],
                                   states[static_cast<std::size_t>(cell_tgt[s * k + x])]});
        }
    }
    return Fsm(std::move(states), "S1", std::move(inputs), std::move(outputs), std::move(transitions));
}

}  // namespace fsmkit
