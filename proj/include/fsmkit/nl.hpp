#pragma once

#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

/// The sentence-pattern pool for describing machines in English. Templates
/// use {src}/{tgt} (a rendered state phrase), {state} (the raw label),
/// {system}, {input}, {output}, {from}, {move} placeholders.
struct PatternSet {
    std::vector<std::string> state_patterns;        // 2 ways to mention a state
    std::vector<std::string> transition_orderings;  // 2 clause orders
    std::vector<std::string> system_phrases;        // 3 subjects
    std::vector<std::string> from_phrases;          // 6 source-state phrases
    std::vector<std::string> move_phrases;          // 3 target-state phrases
    std::vector<std::string> input_phrases;         // 5 trigger phrases
    std::vector<std::string> output_phrases;        // 5 output phrases

    /// The standard pool (spacing quirks included — several phrases carry a
    /// double space on purpose).
    static const PatternSet& standard();

    /// Every list cut to its first entry; describes any transition with
    /// exactly one deterministic sentence.
    PatternSet truncated() const;
};

struct DescribeOptions {
    /// Emit " <sentence>.\n" per transition (the generator's native shape).
    /// When true, collapse all whitespace runs to single spaces instead.
    bool normalize_whitespace = false;
};

/// One English sentence for a transition (no trailing period). State labels
/// of the shape S<digits> are written in lowercase.
std::string describe_transition(const Transition& t, Rng& rng, const PatternSet& patterns = PatternSet::standard());

/// One sentence per transition plus the trailing initial-state sentence
/// "state <init> is the initial state."
std::string describe_fsm(const Fsm& m, Rng& rng, const PatternSet& patterns = PatternSet::standard(),
                         const DescribeOptions& options = {});

/// Inverse of describe_fsm for any text its patterns can produce. Throws
/// ParseError citing the first sentence that matches no pattern.
Fsm parse_description(const std::string& text);

/// Single-sentence inverse of describe_transition.
Transition parse_transition_sentence(const std::string& sentence);

}  // namespace fsmkit
