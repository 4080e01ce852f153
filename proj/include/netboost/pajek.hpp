#pragma once

#include <string>
#include <string_view>

#include "netboost/network.hpp"

namespace netboost {

/// Parses an undirected Pajek NET document (`*Vertices n` then `*Edges`).
///
/// Keywords are case-insensitive, `%` starts a comment line, `\r\n` is
/// accepted. Vertex lines are `id ["label"]`; extra layout tokens after the
/// label are ignored. Edge lines are `u v [w]` with a positive integer w
/// (default 1). Throws Error with the matching parse code.
Network parse_pajek(std::string_view text);

/// Emits `*Vertices n`, one `id "label"` line per node, `*Edges` and one
/// `u v w` line per edge, each terminated by `\n`.
std::string serialize_pajek(const Network& net);

}  // namespace netboost
