#pragma once

#include <iosfwd>
#include <string>

#include "refswarm/graph.hpp"

namespace refswarm {

// Binary graph persistence. Fixed little-endian layout, versioned magic
// header, node table included so rankings can be reported by author name;
// see docs/graph-format.md. load(save(g)) == g bit-exactly.
//
// save_graph requires a normalized graph (std::logic_error otherwise).
// load_graph throws FormatError on magic/version mismatch and
// CorruptionError on truncation or inconsistent counts.
void save_graph(const CoauthorGraph& graph, std::ostream& out);
void save_graph_file(const CoauthorGraph& graph, const std::string& path);

CoauthorGraph load_graph(std::istream& in);
CoauthorGraph load_graph_file(const std::string& path);

}  // namespace refswarm
