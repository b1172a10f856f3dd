#include <doctest.h>

#include <functional>
#include <random>

#include "deceptiplan/formats.hpp"
#include "deceptiplan/multicut.hpp"

using namespace deceptiplan;

namespace {

Digraph random_digraph(std::mt19937& rng, int nodes, int arcs) {
    Digraph g;
    g.num_nodes = nodes;
    for (int v = 0; v < nodes; ++v) g.node_names.push_back("n" + std::to_string(v));
    for (int a = 0; a < arcs; ++a) {
        int s = static_cast<int>(rng() % nodes);
        int t = static_cast<int>(rng() % nodes);
        if (s == t) t = (t + 1) % nodes;
        g.arcs.push_back({s, t});
    }
    return g;
}

PairSet random_pairs(std::mt19937& rng, int nodes, int count) {
    PairSet pairs;
    while (static_cast<int>(pairs.size()) < count) {
        int s = static_cast<int>(rng() % nodes);
        int t = static_cast<int>(rng() % nodes);
        if (s != t) pairs.push_back({s, t});
    }
    return pairs;
}

// smallest T-cut as an explicit arc set (test-local oracle)
std::optional<std::vector<int>> smallest_cut(const Digraph& g, const PairSet& pairs) {
    const int na = static_cast<int>(g.arcs.size());
    for (auto& [s, t] : pairs)
        if (s == t) return std::nullopt;
    for (int k = 0; k <= na; ++k) {
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            if (is_tcut(g, pairs, comb)) return comb;
            int i = k - 1;
            while (i >= 0 && comb[i] == na - k + i) --i;
            if (i < 0) break;
            comb[i]++;
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return std::nullopt;
}

SensorAlteration twin_alteration(const ReducedInstance& reduced, const std::vector<int>& cut) {
    SensorAlteration a = SensorAlteration::identity(reduced.instance.world.num_events);
    for (int arc : cut) a.to[reduced.red_event_of_arc[arc]] = reduced.blue_event_of_arc[arc];
    return a;
}

} // namespace

TEST_CASE("connectify adds exactly the missing pair arcs") {
    std::mt19937 rng(12);
    Digraph g = random_digraph(rng, 5, 5);
    PairSet pairs = random_pairs(rng, 5, 2);

    auto res = connectify(g, pairs, 3);
    for (auto& [s, t] : res.pairs) {
        std::vector<char> removed(res.graph.arcs.size(), 0);
        CHECK(is_tcut(res.graph, {{s, t}}, {}) == false); // now connected
    }
    CHECK(res.k == 3 + static_cast<int>(res.added_arcs.size()));

    // already-connected instances come back unchanged
    auto res2 = connectify(res.graph, res.pairs, res.k);
    CHECK(res2.added_arcs.empty());
    CHECK(res2.k == res.k);
    CHECK(res2.graph.arcs.size() == res.graph.arcs.size());

    // totally disconnected pairs each add one arc
    Digraph bare;
    bare.num_nodes = 4;
    for (int v = 0; v < 4; ++v) bare.node_names.push_back("n" + std::to_string(v));
    PairSet two = {{0, 1}, {2, 3}};
    auto res3 = connectify(bare, two, 0);
    CHECK(res3.added_arcs.size() == 2);
    CHECK(res3.k == 2);

    // the minimum cut grows by exactly the number of added arcs
    for (int round = 0; round < 10; ++round) {
        Digraph rg = random_digraph(rng, 5, 4);
        PairSet rp = random_pairs(rng, 5, 2);
        auto before = brute_force_min_multicut(rg, rp);
        auto conn = connectify(rg, rp, 0);
        auto after = brute_force_min_multicut(conn.graph, conn.pairs);
        REQUIRE(before.has_value());
        REQUIRE(after.has_value());
        CHECK(*after == *before + static_cast<int>(conn.added_arcs.size()));
    }
}

TEST_CASE("brute-force multicut basics") {
    // a single pair along a three-arc path needs one cut
    Digraph path;
    path.num_nodes = 4;
    for (int v = 0; v < 4; ++v) path.node_names.push_back("n" + std::to_string(v));
    path.arcs = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(brute_force_min_multicut(path, {{0, 3}}) == 1);

    // a pair with no path needs no cut at all
    CHECK(brute_force_min_multicut(path, {{3, 0}}) == 0);

    // source == target is uncuttable
    CHECK_FALSE(brute_force_min_multicut(path, {{1, 1}}).has_value());

    // arc budget refusal
    Digraph big = path;
    for (int i = 0; i < 20; ++i) big.arcs.push_back({0, 1});
    CHECK_THROWS(brute_force_min_multicut(big, {{0, 3}}));
}

TEST_CASE("fig4 instance has a three-arc minimum cut") {
    auto [g, pairs] = fig4_multicut();
    CHECK(brute_force_min_multicut(g, pairs) == 3);
    ReducedInstance red = reduce_to_mcsd(g, pairs);
    PlanResult r = solve(red.instance);
    REQUIRE(r.status == PlanStatus::Optimal);
    CHECK(r.cost == Cost(Rational(3)));
}

TEST_CASE("reduction structure") {
    auto [g, pairs] = fig4_multicut();
    ReducedInstance red = reduce_to_mcsd(g, pairs);
    const WorldGraph& w = red.instance.world;

    CHECK(validate(w).empty());
    // one sensor and one event per edge
    CHECK(w.num_events == static_cast<int>(w.edges.size()));
    CHECK(w.num_sensors == w.num_events);

    // deviation admits only red edges after the launch: blue edges trap
    const Fa& dv = red.instance.deviation;
    for (size_t arc = 0; arc < g.arcs.size(); ++arc) {
        // find the blue edge id for this arc through its event
        int blue_edge = -1;
        for (size_t e = 0; e < w.edges.size(); ++e)
            if (w.edges[e].obs[0] == red.blue_event_of_arc[arc]) blue_edge = static_cast<int>(e);
        REQUIRE(blue_edge >= 0);
        for (State s = 0; s < dv.num_states; ++s) {
            State t = dv.dfa_next(s, blue_edge);
            CHECK_FALSE(dv.accepting[t]); // blue edges lead to the trap
        }
    }

    // itinerary accepts exactly source->target realizations with >= 1 blue:
    // an all-red realization is rejected, flipping one edge to blue accepts
    // (using the fig4 three-arc chain for pair 1)
    const Fa& it = red.instance.itinerary;
    auto edge_by_name = [&](const std::string& n) {
        for (size_t e = 0; e < w.edges.size(); ++e)
            if (w.edge_names[e] == n) return static_cast<int>(e);
        return -1;
    };
    int launch = edge_by_name("launch_1");
    int r1 = edge_by_name("red_s1_a_0"), r2 = edge_by_name("red_a_b_1"), r3 = edge_by_name("red_b_t1_2");
    int b3 = edge_by_name("blue_b_t1_2");
    REQUIRE(launch >= 0);
    REQUIRE(r1 >= 0);
    CHECK_FALSE(accepts(it, {launch, r1, r2, r3}));
    CHECK(accepts(it, {launch, r1, r2, b3}));
    CHECK(accepts(red.instance.deviation, {launch, r1, r2, r3}));
    CHECK_FALSE(accepts(red.instance.deviation, {launch, r1, r2, b3}));

    // rejects degenerate inputs
    CHECK_THROWS(reduce_to_mcsd(g, {}));
    CHECK_THROWS(reduce_to_mcsd(g, {{0, 0}}));
}

TEST_CASE("reduction round trip on random digraphs") {
    std::mt19937 rng(2718);
    for (int round = 0; round < 12; ++round) {
        Digraph g = random_digraph(rng, 4 + static_cast<int>(rng() % 2), 5 + static_cast<int>(rng() % 3));
        PairSet pairs = random_pairs(rng, g.num_nodes, 1 + static_cast<int>(rng() % 2));
        auto conn = connectify(g, pairs, 0);

        auto cut = smallest_cut(conn.graph, conn.pairs);
        REQUIRE(cut.has_value());
        ReducedInstance red = reduce_to_mcsd(conn.graph, conn.pairs);

        // forward: the twin alteration of any T-cut is deceptive at cost |cut|
        SensorAlteration fwd = twin_alteration(red, *cut);
        CHECK(is_deceptive(red.instance, fwd).deceptive);
        CHECK(total_cost(fwd, red.instance.cost) == Cost(Rational(static_cast<long long>(cut->size()))));

        // optimal cost equals the minimum cut, and the extracted arcs cut
        PlanResult r = solve(red.instance);
        REQUIRE(r.status == PlanStatus::Optimal);
        CHECK(r.cost == Cost(Rational(static_cast<long long>(cut->size()))));
        auto arcs = extract_cut(red, r.alteration);
        CHECK(arcs.size() == cut->size());
        CHECK(is_tcut(conn.graph, conn.pairs, arcs));
    }
}

TEST_CASE("extract_cut edge cases") {
    auto [g, pairs] = fig4_multicut();
    ReducedInstance red = reduce_to_mcsd(g, pairs);

    SensorAlteration id = SensorAlteration::identity(red.instance.world.num_events);
    CHECK(extract_cut(red, id).empty());

    SensorAlteration infinite = id;
    infinite.to[0] = (0 + 1) % red.instance.world.num_events;
    bool ok = !red.instance.cost.at(0, infinite.to[0]).infinite;
    if (!ok) CHECK_THROWS(extract_cut(red, infinite));
}
