#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"

namespace fsmkit {

struct CsvOptions {
    /// Lenient mode (LLM output): skip chatter before the header and lines
    /// that do not have the 4-field shape instead of failing on them.
    bool lenient = false;
    /// When set, parsed symbols must come from these alphabets and the
    /// resulting machine carries them verbatim (so unused symbols survive).
    std::optional<std::vector<std::string>> expected_inputs;
    std::optional<std::vector<std::string>> expected_outputs;
};

struct ParsedCsv {
    Fsm machine;
    std::vector<std::string> warnings;
};

/// Wire format: header `State,Input,Output,Next_State`, rows `Si,x,y,Sj`.
/// The source state of the first data row is the initial state. Code fences
/// and blank lines are stripped before parsing; exact duplicate rows are
/// dropped with a warning. Rows may repeat a (state, input) cell — that
/// encodes a nondeterministic relation (used for mutation machines).
ParsedCsv parse_csv(const std::string& text, const CsvOptions& options = {});

/// Emits the canonical text: no spaces, `\n` line ends, transitions from the
/// initial state first so parse_csv recovers the initial state.
std::string serialize_csv(const Fsm& m);

}  // namespace fsmkit
