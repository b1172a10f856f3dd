#include "deceptiplan/multicut.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace deceptiplan {

namespace {

bool has_path(const Digraph& g, const std::vector<char>& removed, int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(g.num_nodes, 0);
    std::deque<int> work = {from};
    seen[from] = 1;
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        for (size_t i = 0; i < g.arcs.size(); ++i) {
            if (removed[i] || g.arcs[i].first != v) continue;
            int t = g.arcs[i].second;
            if (t == to) return true;
            if (!seen[t]) {
                seen[t] = 1;
                work.push_back(t);
            }
        }
    }
    return false;
}

std::string node_name(const Digraph& g, int v) {
    return v < static_cast<int>(g.node_names.size()) ? g.node_names[v] : "n" + std::to_string(v);
}

} // namespace

bool is_tcut(const Digraph& g, const PairSet& pairs, const std::vector<int>& cut_arcs) {
    std::vector<char> removed(g.arcs.size(), 0);
    for (int a : cut_arcs) removed[a] = 1;
    for (auto& [s, t] : pairs)
        if (has_path(g, removed, s, t)) return false;
    return true;
}

ConnectifyResult connectify(const Digraph& g, const PairSet& pairs, int k) {
    ConnectifyResult out;
    out.graph = g;
    out.pairs = pairs;
    out.k = k;
    std::vector<char> removed(g.arcs.size(), 0);
    for (auto& [s, t] : pairs) {
        if (has_path(g, removed, s, t)) continue;
        out.added_arcs.push_back(static_cast<int>(out.graph.arcs.size()));
        out.graph.arcs.push_back({s, t});
        removed.push_back(0);
        out.k++;
    }
    return out;
}

std::optional<int> brute_force_min_multicut(const Digraph& g, const PairSet& pairs,
                                            MulticutBudget budget) {
    const int na = static_cast<int>(g.arcs.size());
    if (na > budget.max_arcs)
        throw std::invalid_argument("brute_force_min_multicut: " + std::to_string(na) +
                                    " arcs exceed the budget of " + std::to_string(budget.max_arcs));
    for (auto& [s, t] : pairs)
        if (s == t) return std::nullopt; // an empty path cannot be cut

    // increasing cardinality, first hit is minimal
    for (int k = 0; k <= na; ++k) {
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            if (is_tcut(g, pairs, comb)) return k;
            int i = k - 1;
            while (i >= 0 && comb[i] == na - k + i) --i;
            if (i < 0) break;
            comb[i]++;
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return std::nullopt;
}

ReducedInstance reduce_to_mcsd(const Digraph& g, const PairSet& pairs) {
    if (pairs.empty()) throw std::invalid_argument("reduce_to_mcsd: empty pair set");
    for (auto& [s, t] : pairs) {
        if (s == t) throw std::invalid_argument("reduce_to_mcsd: source equals target");
        std::vector<char> removed(g.arcs.size(), 0);
        if (!has_path(g, removed, s, t))
            throw std::invalid_argument("reduce_to_mcsd: pair " + node_name(g, s) + "->" +
                                        node_name(g, t) + " is disconnected; run connectify first");
    }

    ReducedInstance out;
    WorldGraph& w = out.instance.world;
    const int nt = static_cast<int>(pairs.size());
    const int na = static_cast<int>(g.arcs.size());

    // vertices: v0 followed by the original nodes
    w.num_vertices = g.num_nodes + 1;
    w.initial_vertex = 0;
    w.vertex_names.push_back("v0");
    for (int v = 0; v < g.num_nodes; ++v) w.vertex_names.push_back(node_name(g, v));

    // twin blue/red edges per arc, then one launch edge per pair; every edge
    // carries its own single-event sensor
    out.red_event_of_arc.resize(na);
    out.blue_event_of_arc.resize(na);
    std::vector<int> blue_edge(na), red_edge(na), launch_edge(nt);
    auto add_edge = [&](int src, int tgt, const std::string& name) {
        int e = static_cast<int>(w.edges.size());
        int y = w.num_events++;
        w.edges.push_back({src, tgt, {y}});
        w.edge_names.push_back(name);
        w.event_names.push_back("y_" + name);
        w.sensor_names.push_back("s_" + name);
        w.sensor_events.push_back({y});
        w.event_sensor.push_back(w.num_sensors++);
        return e;
    };
    for (int a = 0; a < na; ++a) {
        auto [x, y] = g.arcs[a];
        std::string base = node_name(g, x) + "_" + node_name(g, y) + "_" + std::to_string(a);
        blue_edge[a] = add_edge(x + 1, y + 1, "blue_" + base);
        red_edge[a] = add_edge(x + 1, y + 1, "red_" + base);
        out.blue_event_of_arc[a] = w.edges[blue_edge[a]].obs[0];
        out.red_event_of_arc[a] = w.edges[red_edge[a]].obs[0];
    }
    for (int i = 0; i < nt; ++i)
        launch_edge[i] = add_edge(0, pairs[i].first + 1, "launch_" + std::to_string(i + 1));

    const int ne = static_cast<int>(w.edges.size());

    // The deviation is the red-only machine: |T| copies of the graph over red
    // edges, the launch edge of pair i entering copy i whose only accepting
    // state is t_i; everything else traps. A deviation tour is therefore an
    // all-red realization of some s_i -> t_i path.
    // States: 0 = start, 1 = trap, then (v, i) for v in V', i in 1..|T|.
    {
        Fa dv;
        dv.kind = FaKind::DfaTotal;
        dv.num_symbols = ne;
        auto state_of = [&](int v, int i) { return 2 + (i - 1) * g.num_nodes + v; };
        dv.num_states = 2 + g.num_nodes * nt;
        dv.initial = 0;
        dv.accepting.assign(dv.num_states, 0);
        for (int i = 0; i < nt; ++i) dv.accepting[state_of(pairs[i].second, i + 1)] = 1;
        dv.delta.assign(static_cast<size_t>(dv.num_states) * ne, 1); // default: trap
        for (int i = 0; i < nt; ++i)
            dv.delta[static_cast<size_t>(0) * ne + launch_edge[i]] = state_of(pairs[i].first, i + 1);
        for (int i = 1; i <= nt; ++i)
            for (int a = 0; a < na; ++a)
                dv.delta[static_cast<size_t>(state_of(g.arcs[a].first, i)) * ne + red_edge[a]] =
                    state_of(g.arcs[a].second, i);
        out.instance.deviation = std::move(dv);
    }

    // The itinerary is the two-column machine: column 2 is reached by taking
    // a blue edge and admits both colors; accepting states are (t_i, i, 2),
    // so allowed tours are s_i -> t_i realizations using at least one blue
    // edge. A twin alteration then disguises every all-red tour exactly when
    // the blued arcs meet every s_i -> t_i path, i.e. when they form a T-cut.
    {
        Fa it;
        it.kind = FaKind::DfaTotal;
        it.num_symbols = ne;
        auto state_of = [&](int v, int i, int j) {
            return 2 + ((i - 1) * 2 + (j - 1)) * g.num_nodes + v;
        };
        it.num_states = 2 + g.num_nodes * nt * 2;
        it.initial = 0;
        it.accepting.assign(it.num_states, 0);
        for (int i = 0; i < nt; ++i) it.accepting[state_of(pairs[i].second, i + 1, 2)] = 1;
        it.delta.assign(static_cast<size_t>(it.num_states) * ne, 1); // trap
        for (int i = 0; i < nt; ++i)
            it.delta[static_cast<size_t>(0) * ne + launch_edge[i]] = state_of(pairs[i].first, i + 1, 1);
        for (int i = 1; i <= nt; ++i)
            for (int a = 0; a < na; ++a) {
                int from = g.arcs[a].first, to = g.arcs[a].second;
                // column 1: red stays, blue advances to column 2
                it.delta[static_cast<size_t>(state_of(from, i, 1)) * ne + red_edge[a]] =
                    state_of(to, i, 1);
                it.delta[static_cast<size_t>(state_of(from, i, 1)) * ne + blue_edge[a]] =
                    state_of(to, i, 2);
                // column 2: both colors stay
                it.delta[static_cast<size_t>(state_of(from, i, 2)) * ne + blue_edge[a]] =
                    state_of(to, i, 2);
                it.delta[static_cast<size_t>(state_of(from, i, 2)) * ne + red_edge[a]] =
                    state_of(to, i, 2);
            }
        out.instance.itinerary = std::move(it);
    }

    // cost: red -> twin blue is 1, identity 0, everything else infinite
    CostFunction c;
    c.num_events = w.num_events;
    c.table.assign(static_cast<size_t>(w.num_events) * w.num_events, Cost::inf());
    for (int y = 0; y < w.num_events; ++y) c.at(y, y) = Cost(Rational(0));
    for (int a = 0; a < na; ++a)
        c.at(out.red_event_of_arc[a], out.blue_event_of_arc[a]) = Cost(Rational(1));
    out.instance.cost = std::move(c);
    return out;
}

std::vector<int> extract_cut(const ReducedInstance& reduced, const SensorAlteration& a) {
    const CostFunction& c = reduced.instance.cost;
    if (total_cost(a, c).infinite)
        throw std::invalid_argument("extract_cut: alteration has infinite cost");
    std::vector<int> cut;
    for (size_t arc = 0; arc < reduced.red_event_of_arc.size(); ++arc) {
        int y = reduced.red_event_of_arc[arc];
        if (a.to[y] == reduced.blue_event_of_arc[arc]) cut.push_back(static_cast<int>(arc));
    }
    return cut;
}

} // namespace deceptiplan
