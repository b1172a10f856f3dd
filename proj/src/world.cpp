#include "deceptiplan/world.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "deceptiplan/alteration.hpp"
#include "deceptiplan/verifier.hpp"

namespace deceptiplan {

int WorldGraph::max_simultaneous() const {
    int m = 0;
    for (auto& e : edges) m = std::max(m, static_cast<int>(e.obs.size()));
    return m;
}

std::vector<std::string> validate(const WorldGraph& g) {
    std::vector<std::string> out;
    auto vertex_name = [&](int v) {
        return v >= 0 && v < static_cast<int>(g.vertex_names.size()) ? g.vertex_names[v]
                                                                     : "#" + std::to_string(v);
    };

    if (g.num_vertices <= 0) out.push_back("world has no vertices");
    if (g.initial_vertex < 0 || g.initial_vertex >= g.num_vertices)
        out.push_back("initial vertex out of range");
    if (g.num_sensors <= 0) out.push_back("world has no sensors");

    std::vector<int> owner(g.num_events, -1);
    for (int s = 0; s < g.num_sensors; ++s) {
        if (s < static_cast<int>(g.sensor_events.size()) && g.sensor_events[s].empty())
            out.push_back("sensor " + g.sensor_names[s] + " has an empty event set");
        if (s >= static_cast<int>(g.sensor_events.size())) continue;
        for (int y : g.sensor_events[s]) {
            if (y < 0 || y >= g.num_events) {
                out.push_back("sensor " + g.sensor_names[s] + " references an unknown event");
                continue;
            }
            if (owner[y] >= 0)
                out.push_back("disjointness: event " + g.event_names[y] + " belongs to sensors " +
                              g.sensor_names[owner[y]] + " and " + g.sensor_names[s]);
            owner[y] = s;
        }
    }
    for (int y = 0; y < g.num_events; ++y)
        if (owner[y] < 0) out.push_back("event " + g.event_names[y] + " belongs to no sensor");

    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        const std::string en = i < g.edge_names.size() ? g.edge_names[i] : "#" + std::to_string(i);
        if (e.src < 0 || e.src >= g.num_vertices || e.tgt < 0 || e.tgt >= g.num_vertices)
            out.push_back("edge " + en + " has an endpoint outside V (" + vertex_name(e.src) +
                          " -> " + vertex_name(e.tgt) + ")");
        if (e.obs.empty()) out.push_back("empty observation on edge " + en);
        for (int y : e.obs)
            if (y < 0 || y >= g.num_events)
                out.push_back("edge " + en + " observes an unknown event");
        if (!std::is_sorted(e.obs.begin(), e.obs.end()) ||
            std::adjacent_find(e.obs.begin(), e.obs.end()) != e.obs.end())
            out.push_back("edge " + en + " observation is not a canonical event set");
    }
    return out;
}

bool is_walk(const WorldGraph& g, const Walk& seq) {
    int at = g.initial_vertex;
    for (int e : seq) {
        if (e < 0 || e >= static_cast<int>(g.edges.size()))
            throw std::invalid_argument("is_walk: unknown edge id");
        if (g.edges[e].src != at) return false;
        at = g.edges[e].tgt;
    }
    return true;
}

std::vector<std::vector<int>> observe(const WorldGraph& g, const Walk& r) {
    std::vector<std::vector<int>> out;
    out.reserve(r.size());
    for (int e : r) {
        if (e < 0 || e >= static_cast<int>(g.edges.size()))
            throw std::invalid_argument("observe: unknown edge id");
        out.push_back(g.edges[e].obs);
    }
    return out;
}

namespace {

// Lift an observation word back to an edge walk of a partial DFA over E,
// preferring the smallest edge id at every position so the result is
// deterministic.
Walk lift_obs_word(const Fa& product, const WorldGraph& g, const SigmaAlphabet& sigma,
                   const std::vector<int>& word) {
    const int ne = static_cast<int>(g.edges.size());
    const size_t n = word.size();
    // layer[i] = set of product states reachable after i symbols
    std::vector<std::vector<char>> layer(n + 1, std::vector<char>(product.num_states, 0));
    layer[0][product.initial] = 1;
    for (size_t i = 0; i < n; ++i)
        for (State s = 0; s < product.num_states; ++s) {
            if (!layer[i][s]) continue;
            for (int e = 0; e < ne; ++e) {
                State t = product.dfa_next(s, e);
                if (t < 0) continue;
                if (sigma.id_of(ObsMultiset::from_set(g.edges[e].obs)) == word[i]) layer[i + 1][t] = 1;
            }
        }
    // pick an accepting end state, then walk backwards
    State end = -1;
    for (State s = 0; s < product.num_states && end < 0; ++s)
        if (layer[n][s] && product.accepting[s]) end = s;
    if (end < 0) throw std::logic_error("lift_obs_word: witness does not lift");

    Walk rev;
    State cur = end;
    for (size_t i = n; i-- > 0;) {
        bool found = false;
        for (State s = 0; s < product.num_states && !found; ++s) {
            if (!layer[i][s]) continue;
            for (int e = 0; e < ne && !found; ++e) {
                if (product.dfa_next(s, e) != cur) continue;
                if (sigma.id_of(ObsMultiset::from_set(g.edges[e].obs)) != word[i]) continue;
                rev.push_back(e);
                cur = s;
                found = true;
            }
        }
        if (!found) throw std::logic_error("lift_obs_word: backtracking failed");
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

} // namespace

CertifyingVerdict is_certifying(const WorldGraph& g, const Fa& itinerary) {
    if (itinerary.kind != FaKind::DfaTotal)
        throw std::invalid_argument("is_certifying: itinerary must be a total DFA");
    if (itinerary.num_symbols != static_cast<int>(g.edges.size()))
        throw std::invalid_argument("is_certifying: alphabet mismatch");

    SigmaAlphabet sigma = build_sigma(g.num_events, std::max(1, g.max_simultaneous()));
    Fa inside = product_with_world(itinerary, g);
    Fa outside = product_with_world(complement(itinerary), g);
    Fa inside_rel = relax_itinerary(inside, g, sigma);
    Fa outside_rel = relax_itinerary(outside, g, sigma);

    auto verdict = intersect_empty(inside_rel, outside_rel);
    if (verdict.empty) return {};

    CertifyingVerdict out;
    out.certifying = false;
    out.inside = lift_obs_word(inside, g, sigma, verdict.witness);
    out.outside = lift_obs_word(outside, g, sigma, verdict.witness);
    return out;
}

} // namespace deceptiplan
