#include "relnas/edgelist.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relnas {

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) {
        out << u << ' ' << v << '\n';
    }
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    std::ostringstream buf;
    write_edge_list(buf, g);
    write_file_atomic(path, buf.str());
}

Graph read_edge_list(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m)) {
        throw std::runtime_error("edge list: missing 'n m' header");
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(in >> u >> v)) {
            throw std::runtime_error("edge list: expected " + std::to_string(m) +
                                     " edges, got " + std::to_string(i));
        }
        if (u >= v) {
            throw std::runtime_error("edge list: edges must satisfy u < v");
        }
        edges.emplace_back(u, v);
    }
    return Graph(n, edges);
}

Graph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_edge_list(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace relnas
