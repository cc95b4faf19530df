#pragma once

#include <cstdint>
#include <vector>

#include "frozen/graphgen.hpp"

namespace frozen {

struct IndepSet {
    std::vector<char> membership;  // 1 = occupied
    int size = 0;
};

struct MisResult {
    int size = 0;
    IndepSet witness;
};

inline constexpr int kBruteForceMaxN = 32;

IndepSet make_indep_set(std::vector<char> membership);

// Throws std::invalid_argument on a length mismatch.
bool is_independent(const RegularGraph& g, const std::vector<char>& membership);

// True when no unoccupied vertex can be added without breaking independence.
bool is_maximal(const RegularGraph& g, const std::vector<char>& membership);

// Exact maximum independent set by branch and bound; refuses n > kBruteForceMaxN.
MisResult brute_force_mis(const RegularGraph& g);

// Inclusion-maximal set built along a seeded random vertex order.
IndepSet greedy_maximal(const RegularGraph& g, std::uint64_t seed);
IndepSet greedy_in_order(const RegularGraph& g, const std::vector<int>& order);

// Bitmask neighbourhoods (n <= 64), self-loops excluded from the mask.
std::vector<std::uint64_t> neighbor_masks(const RegularGraph& g);

}  // namespace frozen
