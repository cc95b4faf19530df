#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frozen/graphgen.hpp"
#include "frozen/isalg.hpp"

namespace frozen {

enum class Spin : std::uint8_t { zero = 0, one = 1, free = 2 };

char spin_char(Spin s);

// Half-integer stored as twice its value.
struct Intensity {
    std::int64_t twice = 0;
    double value() const { return 0.5 * static_cast<double>(twice); }
    friend bool operator==(Intensity, Intensity) = default;
    friend auto operator<=>(Intensity, Intensity) = default;
};

struct FrozenConfig {
    std::vector<Spin> eta;
    std::vector<std::pair<int, int>> matched_pairs;  // half-edge pairs, first < second
    Intensity intensity;
};

Intensity intensity(const FrozenConfig& cfg);
Intensity intensity_of(const std::vector<Spin>& eta);

// Per-move record of a coarsening run.
struct CoarsenTrace {
    int step1_moves = 0;
    int step2_moves = 0;
    std::vector<Intensity> after_step1;
    std::vector<Intensity> after_step2;
    Intensity initial;
};

// Throws std::invalid_argument when x is not independent on g.
FrozenConfig coarsen(const RegularGraph& g, const IndepSet& x, CoarsenTrace* trace = nullptr);

struct Violation {
    std::string rule;  // "a.i", "a.ii", "a.iii", "b", "w.i", "w.ii", "w.iii", "w.match"
    int vertex = -1;
    std::string detail;
};

struct FrozenVerdict {
    bool valid = true;
    std::vector<Violation> violations;
};

FrozenVerdict validate_frozen(const RegularGraph& g, const FrozenConfig& cfg, bool weighted);

struct FreeSubgraphReport {
    std::vector<int> component_sizes;  // sorted ascending
    int component_count = 0;
    int odd_component_count = 0;
    int tree_component_count = 0;
    int tree_components_with_perfect_matching = 0;
    double free_fraction = 0.0;
    double beta_max = 0.0;  // d^{-3/2}
};

FreeSubgraphReport free_subgraph_report(const RegularGraph& g, const FrozenConfig& cfg);

// Spin string over {0,1,f}, newline, then "a-b" half-edge pairs separated by spaces.
std::string serialize_frozen(const FrozenConfig& cfg);
FrozenConfig parse_frozen(const std::string& text);

}  // namespace frozen
