#pragma once

#include <string>

#include "fsmkit/fsm.hpp"

namespace fsmkit {

/// Digraph with edges labeled "input/output". The initial state is marked by
/// an unlabeled edge from a synthetic point-shaped source node.
std::string serialize_dot(const Fsm& m);

/// Accepts the subset of DOT emitted by serialize_dot plus free-form spacing,
/// `//` line comments and quoted identifiers. Edge labels must have the shape
/// input"/"output.
Fsm parse_dot(const std::string& text);

}  // namespace fsmkit
