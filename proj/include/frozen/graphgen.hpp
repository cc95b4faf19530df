#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace frozen {

// Name of the generator behind every seeded draw; recorded in run manifests.
inline constexpr const char* kRngAlgorithm = "std::mt19937_64";
using Rng = std::mt19937_64;

// d-regular multigraph on n vertices stored as a perfect matching of the nd
// half-edges. Half-edge i hangs off vertex i / d.
struct RegularGraph {
    int n = 0;
    int d = 0;
    std::vector<int> matching;

    int half_edge_count() const { return n * d; }
    int vertex_of(int h) const { return h / d; }
    int partner(int h) const { return matching[h]; }
    int neighbor(int h) const { return matching[h] / d; }
};

struct GraphStats {
    long self_loop_count = 0;
    long multi_edge_count = 0;
    bool is_simple = true;
};

// Validates and wraps an explicit matching. Throws std::invalid_argument.
RegularGraph make_graph(int n, int d, std::vector<int> matching);

RegularGraph sample_config_model(int n, int d, std::uint64_t seed);
RegularGraph sample_config_model(int n, int d, Rng& rng);

GraphStats graph_stats(const RegularGraph& g);

// Rejection sampler; std::nullopt when every attempt produced a non-simple graph.
std::optional<RegularGraph> sample_simple(int n, int d, std::uint64_t seed, int max_attempts);

// Neighbour list per vertex with multiplicity; a self-loop lists the vertex twice.
std::vector<std::vector<int>> adjacency(const RegularGraph& g);

bool has_self_loop(const RegularGraph& g, int v);

std::string serialize_graph(const RegularGraph& g);
RegularGraph parse_graph(const std::string& text);

}  // namespace frozen
