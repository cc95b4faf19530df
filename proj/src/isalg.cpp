#include "frozen/isalg.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace frozen {

IndepSet make_indep_set(std::vector<char> membership) {
    IndepSet s;
    s.size = static_cast<int>(std::count(membership.begin(), membership.end(), 1));
    s.membership = std::move(membership);
    return s;
}

bool is_independent(const RegularGraph& g, const std::vector<char>& membership) {
    if (static_cast<int>(membership.size()) != g.n)
        throw std::invalid_argument("membership length must equal n");
    for (int h = 0; h < g.half_edge_count(); ++h)
        if (membership[g.vertex_of(h)] && membership[g.neighbor(h)]) return false;
    return true;
}

bool is_maximal(const RegularGraph& g, const std::vector<char>& membership) {
    if (!is_independent(g, membership)) return false;
    std::vector<char> blocked(g.n, 0);
    for (int h = 0; h < g.half_edge_count(); ++h) {
        const int u = g.vertex_of(h);
        const int v = g.neighbor(h);
        if (u == v) blocked[u] = 1;
        if (membership[v]) blocked[u] = 1;
    }
    for (int v = 0; v < g.n; ++v)
        if (!membership[v] && !blocked[v]) return false;
    return true;
}

std::vector<std::uint64_t> neighbor_masks(const RegularGraph& g) {
    if (g.n > 64) throw std::invalid_argument("bitmask view needs n <= 64");
    std::vector<std::uint64_t> nb(g.n, 0);
    for (int h = 0; h < g.half_edge_count(); ++h) {
        const int u = g.vertex_of(h);
        const int v = g.neighbor(h);
        if (u != v) nb[u] |= std::uint64_t{1} << v;
    }
    return nb;
}

namespace {

struct Search {
    const std::vector<std::uint64_t>& nb;
    int best = -1;
    std::uint64_t best_set = 0;

    void run(std::uint64_t cand, std::uint64_t chosen, int size) {
        if (size + std::popcount(cand) <= best) return;
        if (cand == 0) {
            best = size;
            best_set = chosen;
            return;
        }
        int pivot = -1;
        int pivot_deg = -1;
        for (std::uint64_t c = cand; c; c &= c - 1) {
            const int v = std::countr_zero(c);
            const int deg = std::popcount(nb[v] & cand);
            if (deg > pivot_deg) {
                pivot_deg = deg;
                pivot = v;
            }
        }
        if (pivot_deg == 0) {
            run(0, chosen | cand, size + std::popcount(cand));
            return;
        }
        const std::uint64_t bit = std::uint64_t{1} << pivot;
        // A degree-one pivot's neighbour can always be swapped for the pivot.
        if (pivot_deg <= 1) {
            run(cand & ~bit & ~nb[pivot], chosen | bit, size + 1);
            return;
        }
        run(cand & ~bit & ~nb[pivot], chosen | bit, size + 1);
        run(cand & ~bit, chosen, size);
    }
};

}  // namespace

MisResult brute_force_mis(const RegularGraph& g) {
    if (g.n > kBruteForceMaxN) throw std::invalid_argument("brute_force_mis refuses n > 32");
    const auto nb = neighbor_masks(g);
    std::uint64_t cand = 0;
    for (int v = 0; v < g.n; ++v)
        if (!has_self_loop(g, v)) cand |= std::uint64_t{1} << v;
    Search s{nb};
    s.run(cand, 0, 0);
    std::vector<char> mem(g.n, 0);
    for (int v = 0; v < g.n; ++v) mem[v] = (s.best_set >> v) & 1;
    MisResult r;
    r.witness = make_indep_set(std::move(mem));
    r.size = r.witness.size;
    return r;
}

IndepSet greedy_in_order(const RegularGraph& g, const std::vector<int>& order) {
    const auto adj = adjacency(g);
    std::vector<char> mem(g.n, 0);
    for (int v : order) {
        bool ok = true;
        for (int u : adj[v]) {
            if (u == v || mem[u]) {
                ok = false;
                break;
            }
        }
        if (ok) mem[v] = 1;
    }
    return make_indep_set(std::move(mem));
}

IndepSet greedy_maximal(const RegularGraph& g, std::uint64_t seed) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return greedy_in_order(g, order);
}

}  // namespace frozen
