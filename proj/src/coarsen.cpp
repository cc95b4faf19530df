#include "frozen/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace frozen {

char spin_char(Spin s) {
    switch (s) {
        case Spin::zero: return '0';
        case Spin::one: return '1';
        case Spin::free: return 'f';
    }
    return '?';
}

Intensity intensity_of(const std::vector<Spin>& eta) {
    Intensity it;
    for (Spin s : eta) {
        if (s == Spin::one) it.twice += 2;
        if (s == Spin::free) it.twice += 1;
    }
    return it;
}

Intensity intensity(const FrozenConfig& cfg) { return intensity_of(cfg.eta); }

FrozenConfig coarsen(const RegularGraph& g, const IndepSet& x, CoarsenTrace* trace) {
    if (!is_independent(g, x.membership)) throw std::invalid_argument("coarsen needs an independent set");
    const int n = g.n;
    const int d = g.d;
    FrozenConfig cfg;
    cfg.eta.assign(n, Spin::zero);
    for (int v = 0; v < n; ++v)
        if (x.membership[v]) cfg.eta[v] = Spin::one;

    std::vector<int> one_edges(n, 0);
    for (int h = 0; h < g.half_edge_count(); ++h)
        if (cfg.eta[g.neighbor(h)] == Spin::one) ++one_edges[g.vertex_of(h)];

    std::set<int> triggered;
    for (int v = 0; v < n; ++v)
        if (cfg.eta[v] == Spin::zero && one_edges[v] == 1) triggered.insert(v);

    Intensity running = intensity_of(cfg.eta);
    if (trace) trace->initial = running;

    while (!triggered.empty()) {
        const int v = *triggered.begin();
        triggered.erase(triggered.begin());
        int hv = -1;
        for (int h = v * d; h < (v + 1) * d; ++h) {
            if (cfg.eta[g.neighbor(h)] == Spin::one) {
                hv = h;
                break;
            }
        }
        const int hu = g.partner(hv);
        const int u = g.vertex_of(hu);
        cfg.eta[v] = Spin::free;
        cfg.eta[u] = Spin::free;
        cfg.matched_pairs.emplace_back(std::min(hv, hu), std::max(hv, hu));
        for (int h = u * d; h < (u + 1) * d; ++h) {
            const int w = g.neighbor(h);
            --one_edges[w];
            if (cfg.eta[w] != Spin::zero) continue;
            if (one_edges[w] == 1)
                triggered.insert(w);
            else
                triggered.erase(w);
        }
        if (trace) {
            ++trace->step1_moves;
            trace->after_step1.push_back(intensity_of(cfg.eta));
        }
    }

    for (int v = 0; v < n; ++v) {
        if (cfg.eta[v] == Spin::zero && one_edges[v] == 0) {
            cfg.eta[v] = Spin::free;
            if (trace) {
                ++trace->step2_moves;
                trace->after_step2.push_back(intensity_of(cfg.eta));
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (cfg.eta[v] == Spin::zero && one_edges[v] < 2)
            throw std::logic_error("coarsening left a zero with fewer than two one-edges");

    cfg.intensity = intensity_of(cfg.eta);
    return cfg;
}

namespace {

struct Components {
    std::vector<int> label;  // -1 for non-free vertices
    std::vector<std::vector<int>> members;
    std::vector<long> edge_count;
};

Components free_components(const RegularGraph& g, const std::vector<Spin>& eta) {
    Components c;
    c.label.assign(g.n, -1);
    for (int s = 0; s < g.n; ++s) {
        if (eta[s] != Spin::free || c.label[s] >= 0) continue;
        const int id = static_cast<int>(c.members.size());
        c.members.emplace_back();
        c.edge_count.push_back(0);
        std::vector<int> stack{s};
        c.label[s] = id;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            c.members[id].push_back(v);
            for (int h = v * g.d; h < (v + 1) * g.d; ++h) {
                const int w = g.neighbor(h);
                if (eta[w] != Spin::free) continue;
                if (h < g.partner(h)) ++c.edge_count[id];
                if (c.label[w] < 0) {
                    c.label[w] = id;
                    stack.push_back(w);
                }
            }
        }
    }
    return c;
}

// Leaf stripping decides whether a tree has a perfect matching.
bool tree_has_perfect_matching(const RegularGraph& g, const std::vector<Spin>& eta,
                               const std::vector<int>& members) {
    if (members.size() % 2 != 0) return false;
    std::vector<int> deg(g.n, 0);
    std::vector<char> alive(g.n, 0);
    for (int v : members) alive[v] = 1;
    for (int v : members)
        for (int h = v * g.d; h < (v + 1) * g.d; ++h)
            if (eta[g.neighbor(h)] == Spin::free) ++deg[v];
    std::vector<int> leaves;
    for (int v : members)
        if (deg[v] == 1) leaves.push_back(v);
    std::size_t removed = 0;
    while (!leaves.empty()) {
        const int v = leaves.back();
        leaves.pop_back();
        if (!alive[v]) continue;
        int u = -1;
        for (int h = v * g.d; h < (v + 1) * g.d; ++h) {
            const int w = g.neighbor(h);
            if (eta[w] == Spin::free && alive[w]) u = w;
        }
        if (u < 0) return false;
        alive[v] = alive[u] = 0;
        removed += 2;
        for (int h = u * g.d; h < (u + 1) * g.d; ++h) {
            const int w = g.neighbor(h);
            if (eta[w] != Spin::free || !alive[w]) continue;
            if (--deg[w] == 1) leaves.push_back(w);
            if (deg[w] == 0) return false;
        }
    }
    return removed == members.size();
}

}  // namespace

FreeSubgraphReport free_subgraph_report(const RegularGraph& g, const FrozenConfig& cfg) {
    const Components c = free_components(g, cfg.eta);
    FreeSubgraphReport r;
    r.beta_max = std::pow(static_cast<double>(g.d), -1.5);
    long frees = 0;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        const int size = static_cast<int>(c.members[i].size());
        frees += size;
        r.component_sizes.push_back(size);
        if (size % 2) ++r.odd_component_count;
        if (c.edge_count[i] == size - 1) {
            ++r.tree_component_count;
            if (tree_has_perfect_matching(g, cfg.eta, c.members[i])) ++r.tree_components_with_perfect_matching;
        }
    }
    std::sort(r.component_sizes.begin(), r.component_sizes.end());
    r.component_count = static_cast<int>(c.members.size());
    r.free_fraction = g.n ? static_cast<double>(frees) / g.n : 0.0;
    return r;
}

FrozenVerdict validate_frozen(const RegularGraph& g, const FrozenConfig& cfg, bool weighted) {
    if (static_cast<int>(cfg.eta.size()) != g.n) throw std::invalid_argument("configuration length must equal n");
    FrozenVerdict out;
    auto flag = [&](std::string rule, int v, std::string detail) {
        out.violations.push_back(Violation{std::move(rule), v, std::move(detail)});
    };
    const std::string p = weighted ? "w." : "a.";
    for (int v = 0; v < g.n; ++v) {
        int ones = 0, frees = 0;
        for (int h = v * g.d; h < (v + 1) * g.d; ++h) {
            const Spin s = cfg.eta[g.neighbor(h)];
            if (s == Spin::one) ++ones;
            if (s == Spin::free) ++frees;
        }
        switch (cfg.eta[v]) {
            case Spin::one:
                if (ones || frees) flag(p + "i", v, "one-vertex has a non-zero neighbour");
                break;
            case Spin::zero:
                if (ones < 2) flag(p + "ii", v, "zero-vertex has " + std::to_string(ones) + " one-edges");
                break;
            case Spin::free:
                if (ones) flag(p + "iii", v, "free-vertex neighbours a one-vertex");
                if (!weighted && frees == 0) flag("a.iii", v, "isolated free-vertex");
                break;
        }
    }
    if (!weighted) {
        const Components c = free_components(g, cfg.eta);
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            const long size = static_cast<long>(c.members[i].size());
            if (c.edge_count[i] == size - 1 && !tree_has_perfect_matching(g, cfg.eta, c.members[i]))
                flag("b", c.members[i].front(), "tree free-component of size " + std::to_string(size) +
                                                    " without perfect matching");
        }
    } else {
        std::vector<int> cover(g.n, 0);
        for (const auto& [a, b] : cfg.matched_pairs) {
            const int m = g.half_edge_count();
            if (a < 0 || b < 0 || a >= m || b >= m || g.partner(a) != b) {
                flag("w.match", -1, "pair " + std::to_string(a) + "-" + std::to_string(b) + " is not an edge");
                continue;
            }
            const int u = g.vertex_of(a);
            const int v = g.vertex_of(b);
            if (u == v) {
                flag("w.match", u, "self-loop cannot match a vertex");
                continue;
            }
            if (cfg.eta[u] != Spin::free || cfg.eta[v] != Spin::free)
                flag("w.match", u, "matched pair touches a non-free vertex");
            ++cover[u];
            ++cover[v];
        }
        for (int v = 0; v < g.n; ++v) {
            if (cfg.eta[v] == Spin::free && cover[v] != 1)
                flag("w.iii", v, "free-vertex covered " + std::to_string(cover[v]) + " times");
        }
    }
    out.valid = out.violations.empty();
    return out;
}

std::string serialize_frozen(const FrozenConfig& cfg) {
    std::string s;
    for (Spin x : cfg.eta) s.push_back(spin_char(x));
    s.push_back('\n');
    bool first = true;
    for (const auto& [a, b] : cfg.matched_pairs) {
        if (!first) s.push_back(' ');
        first = false;
        s += std::to_string(a) + "-" + std::to_string(b);
    }
    s.push_back('\n');
    return s;
}

FrozenConfig parse_frozen(const std::string& text) {
    std::istringstream is(text);
    std::string spins;
    if (!std::getline(is, spins)) throw std::invalid_argument("missing spin line");
    FrozenConfig cfg;
    for (char c : spins) {
        if (c == '0') cfg.eta.push_back(Spin::zero);
        else if (c == '1') cfg.eta.push_back(Spin::one);
        else if (c == 'f') cfg.eta.push_back(Spin::free);
        else throw std::invalid_argument(std::string("bad spin character '") + c + "'");
    }
    std::string tok;
    while (is >> tok) {
        const auto dash = tok.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("pair token must be a-b");
        const int a = std::stoi(tok.substr(0, dash));
        const int b = std::stoi(tok.substr(dash + 1));
        cfg.matched_pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    cfg.intensity = intensity_of(cfg.eta);
    return cfg;
}

}  // namespace frozen
