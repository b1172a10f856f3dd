#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "deceptiplan/formats.hpp"
#include "deceptiplan/verifier.hpp"

using namespace deceptiplan;

namespace {

int edge_id(const WorldGraph& w, const std::string& name) {
    for (size_t e = 0; e < w.edges.size(); ++e)
        if (w.edge_names[e] == name) return static_cast<int>(e);
    REQUIRE(false);
    return -1;
}

int event_id(const WorldGraph& w, const std::string& name) {
    for (int y = 0; y < w.num_events; ++y)
        if (w.event_names[y] == name) return y;
    REQUIRE(false);
    return -1;
}

SensorAlteration make_alteration(const WorldGraph& w,
                                 std::initializer_list<std::pair<const char*, const char*>> maps) {
    SensorAlteration a = SensorAlteration::identity(w.num_events);
    for (auto& [from, to] : maps) a.to[event_id(w, from)] = event_id(w, to);
    return a;
}

// Enumerate the observation sequences (as sigma ids) of all walks accepted
// by an edge automaton, up to max_len; plain DFS over the world, independent
// of the relaxation/determinization path under test.
std::set<std::vector<int>> obs_language(const WorldGraph& g, const Fa& acceptor,
                                        const SigmaAlphabet& sigma, const SensorAlteration* alt,
                                        int max_len) {
    std::set<std::vector<int>> out;
    std::vector<int> labels(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e)
        labels[e] = alt ? sigma.id_of(altered_observation(*alt, g, static_cast<int>(e)))
                        : sigma.id_of(ObsMultiset::from_set(g.edges[e].obs));
    std::vector<int> word;
    Word walk;
    std::function<void(int)> rec = [&](int at) {
        if (accepts(acceptor, walk)) out.insert(word);
        if (static_cast<int>(walk.size()) == max_len) return;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (g.edges[e].src != at) continue;
            walk.push_back(static_cast<Symbol>(e));
            word.push_back(labels[e]);
            rec(g.edges[e].tgt);
            word.pop_back();
            walk.pop_back();
        }
    };
    rec(g.initial_vertex);
    return out;
}

// Deceptiveness oracle by explicit observation-language inclusion up to a
// length bound.
bool deceptive_by_enumeration(DeceptionInstance& inst, const SensorAlteration& a, int max_len) {
    auto itinerary_obs = obs_language(inst.world, inst.itinerary, inst.sigma, nullptr, max_len);
    auto deviation_obs = obs_language(inst.world, inst.deviation, inst.sigma, &a, max_len);
    for (auto& w : deviation_obs)
        if (!itinerary_obs.count(w)) return false;
    return true;
}

} // namespace

TEST_CASE("observation relaxations group edges by label") {
    InstanceDoc doc = builtin_instance("department-row3");
    DeceptionInstance& inst = doc.instance;
    inst.ensure_built();

    // the itinerary language is the single walk e9 e25; its relaxation
    // accepts exactly the corresponding two-letter observation word
    Fa relaxed = relax_itinerary(inst.itinerary_product, inst.world, inst.sigma);
    auto words = obs_language(inst.world, inst.itinerary, inst.sigma, nullptr, 3);
    REQUIRE(words.size() == 1);
    std::vector<int> expect = *words.begin();
    CHECK(accepts(relaxed, Word(expect.begin(), expect.end())));
    CHECK_FALSE(accepts(relaxed, {}));
    CHECK_FALSE(accepts(relaxed, Word{expect[0]}));

    // empty-language product relaxes to the empty language
    Fa none = Fa::empty_language(static_cast<int>(inst.world.edges.size()));
    Fa none_p = product_with_world(none, inst.world);
    Fa none_rel = relax_itinerary(none_p, inst.world, inst.sigma);
    CHECK(intersect_empty(none_rel, Fa::single_state(none_rel.num_symbols, true)).empty);

    // two edges with one label from a single state become one
    // nondeterministic transition: e1 and e9 share observation {b1} at K1
    Fa all = Fa::single_state(static_cast<int>(inst.world.edges.size()), true);
    Fa all_rel = relax_itinerary(product_with_world(all, inst.world), inst.world, inst.sigma);
    int b1_label = inst.sigma.id_of(ObsMultiset::from_set({event_id(inst.world, "b1")}));
    const auto* targets = all_rel.nfa_targets(all_rel.initial, b1_label);
    REQUIRE(targets != nullptr);
    CHECK(targets->size() == 2); // K2 and K3
}

TEST_CASE("relaxation language equals the walk-observation language") {
    std::function<void(int, std::vector<int>&, const std::function<void(const std::vector<int>&)>&)>
        words = [&](int nsym, std::vector<int>& w, const std::function<void(const std::vector<int>&)>& f) {
            f(w);
            if (w.size() == 3) return;
            for (int x = 0; x < nsym; ++x) {
                w.push_back(x);
                words(nsym, w, f);
                w.pop_back();
            }
        };
    for (int round = 0; round < 10; ++round) {
        GenParams params;
        params.num_vertices = 3;
        params.num_edges = 4;
        params.num_events = 3;
        params.seed = 8800 + round;
        InstanceDoc doc = gen_random(params);
        DeceptionInstance& inst = doc.instance;
        inst.ensure_built();
        Fa relaxed = relax_itinerary(inst.itinerary_product, inst.world, inst.sigma);
        auto reference = obs_language(inst.world, inst.itinerary, inst.sigma, nullptr, 3);
        std::vector<int> w;
        words(relaxed.num_symbols, w, [&](const std::vector<int>& word) {
            CHECK(accepts(relaxed, Word(word.begin(), word.end())) ==
                  (reference.count(word) > 0));
        });
    }
}

TEST_CASE("green-vault swap is deceptive at cost six") {
    InstanceDoc doc = builtin_instance("green-vault");
    SensorAlteration swap = SensorAlteration::identity(doc.instance.world.num_events);
    auto sw = [&](const char* a, const char* b) {
        int ia = event_id(doc.instance.world, a), ib = event_id(doc.instance.world, b);
        swap.to[ia] = ib;
        swap.to[ib] = ia;
    };
    sw("o3", "o10");
    sw("o4", "o9");
    sw("o5", "o8");
    CHECK(total_cost(swap, doc.instance.cost) == Cost(Rational(6)));
    CHECK(is_deceptive(doc.instance, swap).deceptive);
    // the physical swap is feasible; one-directional remaps may be cheaper
    PlanResult r = solve(doc.instance);
    REQUIRE(r.status == PlanStatus::Optimal);
    CHECK(r.cost <= Cost(Rational(6)));
}

TEST_CASE("relaxing the deviation applies the alteration") {
    InstanceDoc doc = builtin_instance("department-row4");
    DeceptionInstance& inst = doc.instance;
    inst.ensure_built();

    // identity alteration keeps the original labels
    SensorAlteration id = SensorAlteration::identity(inst.world.num_events);
    auto plain = obs_language(inst.world, inst.deviation, inst.sigma, nullptr, 4);
    auto relabeled = obs_language(inst.world, inst.deviation, inst.sigma, &id, 4);
    CHECK(plain == relabeled);

    // the row-4 alteration maps the deviation walk's observations onto the
    // walk e17 e21 e22 e18, which the itinerary accepts
    SensorAlteration a = make_alteration(inst.world, {{"b1", "b3"}, {"b2", "b5"}, {"b4", "b5"}});
    Walk target = {edge_id(inst.world, "e17"), edge_id(inst.world, "e21"),
                   edge_id(inst.world, "e22"), edge_id(inst.world, "e18")};
    CHECK(accepts(inst.itinerary, Word(target.begin(), target.end())));
    CHECK(is_walk(inst.world, target));
    CHECK(is_deceptive(inst, a).deceptive);
    Walk dev = {edge_id(inst.world, "e9"), edge_id(inst.world, "e25"), edge_id(inst.world, "e26"),
                edge_id(inst.world, "e10")};
    auto altered = altered_observe(a, inst.world, dev);
    auto wanted = observe(inst.world, target);
    REQUIRE(altered.size() == wanted.size());
    for (size_t i = 0; i < altered.size(); ++i)
        CHECK(altered[i] == ObsMultiset::from_set(wanted[i]));

    // collapsing both events of an edge doubles a multiplicity in the label
    SensorAlteration collapse = make_alteration(inst.world, {{"o3+", "b4"}});
    ObsMultiset doubled = altered_observation(collapse, inst.world, edge_id(inst.world, "e25"));
    CHECK(doubled.items == std::vector<std::pair<int, int>>{{event_id(inst.world, "b4"), 2}});
}

TEST_CASE("outside acceptor structure") {
    // all-walks itinerary: every realizable observation sequence is allowed,
    // so O accepts none of them
    InstanceDoc doc = builtin_instance("department-row1");
    DeceptionInstance& inst = doc.instance;
    inst.ensure_built();
    auto realizable = obs_language(inst.world, inst.itinerary, inst.sigma, nullptr, 4);
    for (auto& w : realizable) CHECK_FALSE(accepts(inst.outside, Word(w.begin(), w.end())));

    // q_sink is accepting and a fixpoint of every symbol
    REQUIRE(inst.outside_sink >= 0);
    CHECK(inst.outside.accepting[inst.outside_sink]);
    for (int x = 0; x < inst.outside.num_symbols; ++x)
        CHECK(inst.outside.dfa_next(inst.outside_sink, x) == inst.outside_sink);

    // row 3: exactly one realizable two-letter word is rejected by O
    InstanceDoc row3 = builtin_instance("department-row3");
    row3.instance.ensure_built();
    const Fa& o3 = row3.instance.outside;
    int rejected = 0;
    for (int x1 = 0; x1 < o3.num_symbols; ++x1)
        for (int x2 = 0; x2 < o3.num_symbols; ++x2)
            if (!accepts(o3, {x1, x2})) ++rejected;
    CHECK(rejected == 1);
}

TEST_CASE("deceptiveness decisions on the department scenarios") {
    InstanceDoc row1 = builtin_instance("department-row1");
    SensorAlteration id1 = SensorAlteration::identity(row1.instance.world.num_events);
    CHECK(is_deceptive(row1.instance, id1).deceptive);

    InstanceDoc row3 = builtin_instance("department-row3");
    SensorAlteration sol3 = make_alteration(row3.instance.world, {{"b3", "b4"}, {"o1+", "o3+"}});
    CHECK(is_deceptive(row3.instance, sol3).deceptive);
    SensorAlteration id3 = SensorAlteration::identity(row3.instance.world.num_events);
    auto v = is_deceptive(row3.instance, id3);
    CHECK_FALSE(v.deceptive);
    // witness soundness
    Word word(v.witness_walk.begin(), v.witness_walk.end());
    CHECK(is_walk(row3.instance.world, v.witness_walk));
    CHECK(accepts(row3.instance.deviation, word));
    auto altered = altered_observe(id3, row3.instance.world, v.witness_walk);
    REQUIRE(altered.size() == v.witness_obs.size());
    for (size_t i = 0; i < altered.size(); ++i)
        CHECK(row3.instance.sigma.id_of(altered[i]) == v.witness_obs[i]);
    Word obs_word(v.witness_obs.begin(), v.witness_obs.end());
    CHECK(accepts(row3.instance.outside, obs_word));

    // row 5 admits no deceptive alteration at all; spot-check a few
    InstanceDoc row5 = builtin_instance("department-row5");
    const WorldGraph& w5 = row5.instance.world;
    CHECK_FALSE(is_deceptive(row5.instance, SensorAlteration::identity(w5.num_events)).deceptive);
    std::mt19937 rng(4);
    for (int i = 0; i < 25; ++i) {
        SensorAlteration r = SensorAlteration::identity(w5.num_events);
        for (auto& t : r.to) t = static_cast<int>(rng() % w5.num_events);
        CHECK_FALSE(is_deceptive(row5.instance, r).deceptive);
    }
}

TEST_CASE("is_deceptive agrees with bounded semantic enumeration") {
    std::mt19937 rng(31);
    int agreements = 0;
    for (int round = 0; round < 40; ++round) {
        GenParams params;
        params.num_vertices = 3;
        params.num_edges = 4 + static_cast<int>(rng() % 2);
        params.num_events = 3;
        params.seed = 7000 + round;
        InstanceDoc doc = gen_random(params);
        DeceptionInstance& inst = doc.instance;
        inst.ensure_built();

        SensorAlteration a = SensorAlteration::identity(inst.world.num_events);
        for (auto& t : a.to) t = static_cast<int>(rng() % inst.world.num_events);
        auto verdict = is_deceptive(inst, a);
        int bound = 6;
        if (!verdict.deceptive)
            bound = std::max<int>(bound, static_cast<int>(verdict.witness_walk.size()));
        bool oracle = deceptive_by_enumeration(inst, a, bound);
        CHECK(verdict.deceptive == oracle);
        agreements += verdict.deceptive == oracle;
    }
    CHECK(agreements == 40);
}

TEST_CASE("brute-force baseline") {
    // too many events for the default budget: explicit refusal with the count
    InstanceDoc row1 = builtin_instance("department-row1");
    CHECK_THROWS_AS(brute_force_plan(row1.instance), std::invalid_argument);
    try {
        brute_force_plan(row1.instance);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("budget exceeded") != std::string::npos);
    }

    GenParams params;
    params.num_events = 3;
    params.num_vertices = 3;
    params.num_edges = 4;
    params.seed = 77;
    params.deviation_density = 0.0; // empty deviation: everything is deceptive
    InstanceDoc doc = gen_random(params);
    PlanResult r = brute_force_plan(doc.instance);
    CHECK(r.status == PlanStatus::Optimal);
    CHECK(r.cost == Cost(Rational(0)));

    // first-found map is optimal in nondecreasing cost order: cross-check a
    // few seeds against plain exhaustive search with a final min
    for (std::uint64_t seed : {101u, 102u, 103u}) {
        GenParams p2;
        p2.num_events = 2;
        p2.num_vertices = 3;
        p2.num_edges = 4;
        p2.seed = seed;
        InstanceDoc d2 = gen_random(p2);
        PlanResult fast = brute_force_plan(d2.instance);

        Cost best = Cost::inf();
        const int ny = d2.instance.world.num_events;
        for (int m0 = 0; m0 < ny; ++m0)
            for (int m1 = 0; m1 < ny; ++m1) {
                SensorAlteration a;
                a.to = {m0, m1};
                Cost c = total_cost(a, d2.instance.cost);
                if (c.infinite || !(c < best)) continue;
                if (is_deceptive(d2.instance, a).deceptive) best = c;
            }
        if (fast.status == PlanStatus::Optimal) {
            CHECK(fast.cost == best);
            CHECK(is_deceptive(d2.instance, fast.alteration).deceptive);
        } else {
            CHECK(best.infinite);
        }
    }
}
