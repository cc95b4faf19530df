#include <doctest.h>

#include <cmath>
#include <map>

#include "frozen/graphgen.hpp"
#include "oracles.hpp"

using namespace frozen;

TEST_CASE("two half-edges admit one matching") {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        const RegularGraph g = sample_config_model(2, 1, seed);
        CHECK(g.matching == std::vector<int>{1, 0});
    }
}

TEST_CASE("sampling rejects bad shapes") {
    CHECK_THROWS_AS(sample_config_model(3, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_config_model(0, 2, 1), std::invalid_argument);
}

TEST_CASE("sampled matchings are fixed-point-free involutions") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const RegularGraph g = sample_config_model(11, 4, seed);
        for (int i = 0; i < g.half_edge_count(); ++i) {
            REQUIRE(g.matching[i] != i);
            REQUIRE(g.matching[g.matching[i]] == i);
        }
        const auto adj = adjacency(g);
        for (int v = 0; v < g.n; ++v) CHECK(adj[v].size() == 4u);
    }
}

TEST_CASE("equal seeds give identical graphs") {
    CHECK(sample_config_model(4, 3, 1234).matching == sample_config_model(4, 3, 1234).matching);
    CHECK(serialize_graph(sample_config_model(40, 5, 7)) == serialize_graph(sample_config_model(40, 5, 7)));
}

TEST_CASE("n=3 d=2 matchings are uniform") {
    const auto all = oracle::all_matchings(6);
    REQUIRE(all.size() == 15u);
    std::map<std::vector<int>, int> freq;
    for (const auto& m : all) freq[m] = 0;
    Rng rng(2024);
    const int samples = 15000;
    for (int s = 0; s < samples; ++s) {
        const RegularGraph g = sample_config_model(3, 2, rng);
        REQUIRE(freq.count(g.matching) == 1);
        ++freq[g.matching];
    }
    const double expected = samples / 15.0;
    const double sigma = std::sqrt(expected * (1.0 - 1.0 / 15.0));
    double chi2 = 0.0;
    for (const auto& [m, c] : freq) {
        CHECK(std::abs(c - expected) <= 5.0 * sigma);
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 14 degrees of freedom; 36.1 is the 0.999 quantile.
    CHECK(chi2 < 36.1);
}

TEST_CASE("graph_stats on hand-built graphs") {
    const GraphStats dbl = graph_stats(make_graph(2, 2, {2, 3, 0, 1}));
    CHECK(dbl.multi_edge_count == 1);
    CHECK(dbl.self_loop_count == 0);
    CHECK_FALSE(dbl.is_simple);

    const GraphStats loops = graph_stats(make_graph(2, 2, {1, 0, 3, 2}));
    CHECK(loops.self_loop_count == 2);
    CHECK_FALSE(loops.is_simple);

    const GraphStats two = graph_stats(make_graph(4, 1, {1, 0, 3, 2}));
    CHECK(two.is_simple);
    CHECK(two.self_loop_count == 0);
    CHECK(two.multi_edge_count == 0);

    // Triple edge between two vertices counts as two excess edges.
    const GraphStats triple = graph_stats(make_graph(2, 3, {3, 4, 5, 0, 1, 2}));
    CHECK(triple.multi_edge_count == 2);
}

TEST_CASE("make_graph validates the involution") {
    CHECK_THROWS_AS(make_graph(2, 1, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_graph(2, 2, {1, 2, 3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_graph(2, 2, {1, 0}), std::invalid_argument);
}

TEST_CASE("sample_simple") {
    auto one = sample_simple(2, 1, 5, 1);
    REQUIRE(one.has_value());
    CHECK(graph_stats(*one).is_simple);

    // n=2, d=2 is never simple: every matching has a loop or a double edge.
    CHECK_FALSE(sample_simple(2, 2, 3, 1).has_value());
    CHECK_FALSE(sample_simple(2, 2, 3, 50).has_value());

    auto g = sample_simple(20, 3, 11, 1000);
    REQUIRE(g.has_value());
    CHECK(graph_stats(*g).is_simple);
}

TEST_CASE("simple acceptance rate for n=20 d=3") {
    // Finite-n rate checked against an independent pairing sampler; the
    // asymptotic value is only approached slowly in n.
    const int runs = 10000, oracle_runs = 40000;
    int ok = 0, ok_oracle = 0;
    for (int s = 0; s < runs; ++s)
        if (graph_stats(sample_config_model(20, 3, 1000003ull * s + 17)).is_simple) ++ok;
    for (int s = 0; s < oracle_runs; ++s)
        if (graph_stats(oracle::sequential_pairing(20, 3, s)).is_simple) ++ok_oracle;
    const double p1 = double(ok) / runs, p2 = double(ok_oracle) / oracle_runs;
    const double se = std::sqrt(p1 * (1 - p1) / runs + p2 * (1 - p2) / oracle_runs);
    const double d = 3.0;
    const double asym = std::exp(-(d - 1.0) / 2.0 - (d - 1.0) * (d - 1.0) / 4.0);
    MESSAGE("acceptance " << p1 << ", pairing oracle " << p2 << ", asymptotic " << asym);
    CHECK(std::abs(p1 - p2) <= 3.0 * se);
}

TEST_CASE("simple acceptance rate approaches the asymptotic value") {
    const int runs = 10000, n = 2000;
    int ok = 0;
    for (int s = 0; s < runs; ++s)
        if (graph_stats(sample_config_model(n, 3, 77ull * s + 5)).is_simple) ++ok;
    const double p = std::exp(-1.0 - 1.0);
    const double sd = std::sqrt(runs * p * (1 - p));
    MESSAGE("n=" << n << " acceptance " << ok << " of " << runs << ", asymptotic " << p * runs);
    CHECK(std::abs(ok - p * runs) <= 3.0 * sd);
}

TEST_CASE("serialization round trip") {
    const RegularGraph g = sample_config_model(9, 4, 31);
    const RegularGraph h = parse_graph(serialize_graph(g));
    CHECK(h.n == 9);
    CHECK(h.d == 4);
    CHECK(h.matching == g.matching);
    CHECK_THROWS(parse_graph("3 2\n1 0 3"));
}
