#include "deceptiplan/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>

namespace deceptiplan {

namespace {

// Group the outgoing edges of a partial DFA over E by an observation label,
// producing an NFA over Sigma.
Fa relax_with_labels(const Fa& p, const SigmaAlphabet& sigma, const std::vector<int>& edge_label) {
    if (p.kind == FaKind::Nfa) throw std::invalid_argument("relaxation expects a DFA over edges");
    Fa out;
    out.kind = FaKind::Nfa;
    out.num_states = p.num_states;
    out.num_symbols = static_cast<int>(sigma.symbols.size());
    out.initial = p.initial;
    out.accepting = p.accepting;
    out.moves.resize(p.num_states);
    const int ne = p.num_symbols;
    for (State s = 0; s < p.num_states; ++s) {
        std::map<Symbol, std::vector<State>> grouped;
        for (int e = 0; e < ne; ++e) {
            State t = p.dfa_next(s, e);
            if (t < 0) continue;
            grouped[edge_label[e]].push_back(t);
        }
        for (auto& [x, ts] : grouped) {
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            out.moves[s].push_back({x, std::move(ts)});
        }
    }
    return out;
}

std::vector<int> identity_labels(const WorldGraph& g, const SigmaAlphabet& sigma) {
    std::vector<int> labels(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        labels[e] = sigma.id_of(ObsMultiset::from_set(g.edges[e].obs));
        if (labels[e] < 0) throw std::invalid_argument("edge observation outside Sigma");
    }
    return labels;
}

} // namespace

Fa relax_itinerary(const Fa& p, const WorldGraph& g, const SigmaAlphabet& sigma) {
    return relax_with_labels(p, sigma, identity_labels(g, sigma));
}

Fa relax_deviation(const Fa& m, const WorldGraph& g, const SensorAlteration& a,
                   const SigmaAlphabet& sigma) {
    std::vector<int> labels(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        labels[e] = sigma.id_of(altered_observation(a, g, static_cast<int>(e)));
        if (labels[e] < 0) throw std::invalid_argument("altered observation outside Sigma");
    }
    return relax_with_labels(m, sigma, labels);
}

std::pair<Fa, State> build_outside_acceptor(const Fa& itinerary_product, const WorldGraph& g,
                                            const SigmaAlphabet& sigma, const std::vector<int>& zset) {
    Fa relaxed = relax_itinerary(itinerary_product, g, sigma);
    Fa o = minimize(complement(determinize(relaxed)));

    // The walk-observation language is prefix closed, so the minimized
    // complement has a unique accepting trap that every non-realizable
    // observation jumps to from every state.
    const int ns = o.num_symbols;
    std::vector<char> in_z(ns, 0);
    for (int z : zset) in_z[z] = 1;

    State sink = -1;
    for (State s = 0; s < o.num_states; ++s) {
        if (!o.accepting[s]) continue;
        bool trap = true;
        for (Symbol x = 0; x < ns && trap; ++x) trap = o.dfa_next(s, x) == s;
        if (!trap) continue;
        if (sink >= 0) throw std::logic_error("outside acceptor: accepting trap is not unique");
        sink = s;
    }
    if (sink < 0)
        throw std::logic_error(
            "outside acceptor: no accepting trap state; the world realizes every observation "
            "sequence, which the sink-based formulation cannot represent");
    for (State s = 0; s < o.num_states; ++s)
        for (Symbol x = 0; x < ns; ++x)
            if (!in_z[x] && o.dfa_next(s, x) != sink)
                throw std::logic_error("outside acceptor: non-realizable observation escapes the sink");
    return {std::move(o), sink};
}

void DeceptionInstance::ensure_built() {
    if (built) return;
    if (itinerary.kind != FaKind::DfaTotal || deviation.kind != FaKind::DfaTotal)
        throw std::invalid_argument("instance automata must be total DFAs over the edge alphabet");
    if (itinerary.num_symbols != static_cast<int>(world.edges.size()) ||
        deviation.num_symbols != static_cast<int>(world.edges.size()))
        throw std::invalid_argument("instance automata alphabet mismatch");
    sigma = build_sigma(world.num_events, std::max(1, world.max_simultaneous()));
    zset = realizable_set(world, sigma);
    itinerary_product = product_with_world(itinerary, world);
    deviation_product = product_with_world(deviation, world);
    auto [o, sink] = build_outside_acceptor(itinerary_product, world, sigma, zset);
    outside = std::move(o);
    outside_sink = sink;
    built = true;
}

DeceptionVerdict is_deceptive(DeceptionInstance& instance, const SensorAlteration& a) {
    instance.ensure_built();
    if (static_cast<int>(a.to.size()) != instance.world.num_events)
        throw std::invalid_argument("is_deceptive: alteration domain mismatch");

    Fa relaxed = relax_deviation(instance.deviation_product, instance.world, a, instance.sigma);
    Fa dev_dfa = determinize(relaxed);
    auto verdict = intersect_empty(instance.outside, dev_dfa);
    if (verdict.empty) return {};

    DeceptionVerdict out;
    out.deceptive = false;
    out.witness_obs = verdict.witness;

    // Lift the observation word to a deviation walk through M, smallest edge
    // ids first for determinism.
    const Fa& m = instance.deviation_product;
    const WorldGraph& g = instance.world;
    const int ne = static_cast<int>(g.edges.size());
    const size_t n = verdict.witness.size();
    std::vector<int> labels(ne);
    for (int e = 0; e < ne; ++e) labels[e] = instance.sigma.id_of(altered_observation(a, g, e));

    std::vector<std::vector<char>> layer(n + 1, std::vector<char>(m.num_states, 0));
    layer[0][m.initial] = 1;
    for (size_t i = 0; i < n; ++i)
        for (State s = 0; s < m.num_states; ++s) {
            if (!layer[i][s]) continue;
            for (int e = 0; e < ne; ++e) {
                State t = m.dfa_next(s, e);
                if (t >= 0 && labels[e] == verdict.witness[i]) layer[i + 1][t] = 1;
            }
        }
    State end = -1;
    for (State s = 0; s < m.num_states && end < 0; ++s)
        if (layer[n][s] && m.accepting[s]) end = s;
    if (end < 0) throw std::logic_error("is_deceptive: witness does not lift to a deviation walk");
    Walk rev;
    State cur = end;
    for (size_t i = n; i-- > 0;) {
        bool found = false;
        for (State s = 0; s < m.num_states && !found; ++s) {
            if (!layer[i][s]) continue;
            for (int e = 0; e < ne && !found; ++e)
                if (m.dfa_next(s, e) == cur && labels[e] == verdict.witness[i]) {
                    rev.push_back(e);
                    cur = s;
                    found = true;
                }
        }
        if (!found) throw std::logic_error("is_deceptive: witness backtracking failed");
    }
    std::reverse(rev.begin(), rev.end());
    out.witness_walk = std::move(rev);
    return out;
}

PlanResult brute_force_plan(DeceptionInstance& instance, BruteForceBudget budget) {
    instance.ensure_built();
    const int ny = instance.world.num_events;

    double maps = 1;
    for (int y = 0; y < ny; ++y) maps *= ny;
    if (maps > static_cast<double>(budget.max_maps))
        throw std::invalid_argument("budget exceeded: enumerating all total maps needs " +
                                    std::to_string(static_cast<unsigned long long>(maps)) +
                                    " candidates (budget " + std::to_string(budget.max_maps) + ")");

    // Best-first over partial assignments; an admissible completion bound
    // makes completed maps pop in nondecreasing total-cost order.
    std::vector<Cost> min_row(ny, Cost::inf());
    for (int y = 0; y < ny; ++y)
        for (int t = 0; t < ny; ++t)
            if (instance.cost.at(y, t) < min_row[y]) min_row[y] = instance.cost.at(y, t);
    for (int y = 0; y < ny; ++y)
        if (min_row[y].infinite) {
            PlanResult r;
            r.status = PlanStatus::Infeasible;
            r.certificate = "event " + instance.world.event_names[y] + " has no finite-cost target";
            return r;
        }

    struct Node {
        Cost bound;
        std::vector<int> prefix;
    };
    auto cmp = [](const Node& a, const Node& b) {
        if (a.bound.value != b.bound.value) return b.bound.value < a.bound.value;
        return b.prefix < a.prefix; // deterministic tie order
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> pq(cmp);

    Cost root{Rational(0)};
    for (int y = 0; y < ny; ++y) root += min_row[y];
    pq.push({root, {}});

    PlanResult result;
    auto started = std::chrono::steady_clock::now();
    while (!pq.empty()) {
        Node node = pq.top();
        pq.pop();
        result.nodes_expanded++;
        int depth = static_cast<int>(node.prefix.size());
        if (depth == ny) {
            SensorAlteration a;
            a.to = node.prefix;
            if (is_deceptive(instance, a).deceptive) {
                result.status = PlanStatus::Optimal;
                result.alteration = std::move(a);
                result.cost = node.bound;
                break;
            }
            continue;
        }
        for (int t = 0; t < ny; ++t) {
            const Cost& c = instance.cost.at(depth, t);
            if (c.infinite) continue;
            Node child;
            child.bound = node.bound;
            child.bound.value = child.bound.value - min_row[depth].value + c.value;
            child.prefix = node.prefix;
            child.prefix.push_back(t);
            pq.push(std::move(child));
        }
    }
    if (result.status == PlanStatus::Infeasible)
        result.certificate = "all total alterations enumerated; none deceptive";
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace deceptiplan
