#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "relnas/graph.hpp"

namespace relnas {

// Canonical on-disk graph format: first line "n m", then m lines "u v"
// with u < v, whitespace separated, newline terminated.

void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);

/// Atomic file write: stream into "<path>.tmp", then rename over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Format a double with 17 significant digits (round-trip safe).
std::string format_double(double value);

}  // namespace relnas
