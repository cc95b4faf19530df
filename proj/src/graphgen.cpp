#include "frozen/graphgen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace frozen {

namespace {

void check_shape(int n, int d) {
    if (n < 1) throw std::invalid_argument("graph needs n >= 1");
    if (d < 1) throw std::invalid_argument("graph needs d >= 1");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("n*d must be even");
}

}  // namespace

RegularGraph make_graph(int n, int d, std::vector<int> matching) {
    check_shape(n, d);
    const int m = n * d;
    if (static_cast<int>(matching.size()) != m)
        throw std::invalid_argument("matching length must equal n*d");
    for (int i = 0; i < m; ++i) {
        const int j = matching[i];
        if (j < 0 || j >= m || j == i || matching[j] != i)
            throw std::invalid_argument("matching is not a fixed-point-free involution");
    }
    return RegularGraph{n, d, std::move(matching)};
}

RegularGraph sample_config_model(int n, int d, Rng& rng) {
    check_shape(n, d);
    const int m = n * d;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> matching(m);
    for (int i = 0; i < m; i += 2) {
        matching[order[i]] = order[i + 1];
        matching[order[i + 1]] = order[i];
    }
    return RegularGraph{n, d, std::move(matching)};
}

RegularGraph sample_config_model(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    return sample_config_model(n, d, rng);
}

GraphStats graph_stats(const RegularGraph& g) {
    GraphStats s;
    std::map<std::pair<int, int>, int> mult;
    for (int h = 0; h < g.half_edge_count(); ++h) {
        const int p = g.partner(h);
        if (p < h) continue;
        const int u = g.vertex_of(h);
        const int v = g.vertex_of(p);
        if (u == v) {
            ++s.self_loop_count;
        } else {
            ++mult[{std::min(u, v), std::max(u, v)}];
        }
    }
    for (const auto& [key, count] : mult) s.multi_edge_count += count - 1;
    s.is_simple = s.self_loop_count == 0 && s.multi_edge_count == 0;
    return s;
}

std::optional<RegularGraph> sample_simple(int n, int d, std::uint64_t seed, int max_attempts) {
    if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
    Rng rng(seed);
    for (int a = 0; a < max_attempts; ++a) {
        RegularGraph g = sample_config_model(n, d, rng);
        if (graph_stats(g).is_simple) return g;
    }
    return std::nullopt;
}

std::vector<std::vector<int>> adjacency(const RegularGraph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (int h = 0; h < g.half_edge_count(); ++h) adj[g.vertex_of(h)].push_back(g.neighbor(h));
    return adj;
}

bool has_self_loop(const RegularGraph& g, int v) {
    for (int h = v * g.d; h < (v + 1) * g.d; ++h)
        if (g.neighbor(h) == v) return true;
    return false;
}

std::string serialize_graph(const RegularGraph& g) {
    std::ostringstream os;
    os << g.n << ' ' << g.d << '\n';
    for (int i = 0; i < g.half_edge_count(); ++i) os << (i ? " " : "") << g.matching[i];
    os << '\n';
    return os.str();
}

RegularGraph parse_graph(const std::string& text) {
    std::istringstream is(text);
    int n = 0, d = 0;
    if (!(is >> n >> d)) throw std::invalid_argument("graph header must be 'n d'");
    if (n < 1 || d < 1) throw std::invalid_argument("graph header out of range");
    std::vector<int> matching;
    matching.reserve(static_cast<std::size_t>(n) * d);
    int x;
    while (is >> x) matching.push_back(x);
    return make_graph(n, d, std::move(matching));
}

}  // namespace frozen
