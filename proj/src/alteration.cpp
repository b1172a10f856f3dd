#include "deceptiplan/alteration.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace deceptiplan {

bool ObsMultiset::operator<(const ObsMultiset& o) const {
    // by cardinality, then lexicographically on the flattened event list
    int ca = cardinality(), cb = o.cardinality();
    if (ca != cb) return ca < cb;
    return items < o.items;
}

ObsMultiset ObsMultiset::from_set(const std::vector<int>& sorted_events) {
    ObsMultiset m;
    m.items.reserve(sorted_events.size());
    for (int e : sorted_events) m.items.push_back({e, 1});
    return m;
}

namespace {

void enumerate_multisets(int num_events, int size, int from, ObsMultiset& cur,
                         std::vector<ObsMultiset>& out) {
    if (size == 0) {
        out.push_back(cur);
        return;
    }
    for (int e = from; e < num_events; ++e) {
        if (!cur.items.empty() && cur.items.back().first == e)
            cur.items.back().second++;
        else
            cur.items.push_back({e, 1});
        enumerate_multisets(num_events, size - 1, e, cur, out);
        if (cur.items.back().second > 1)
            cur.items.back().second--;
        else
            cur.items.pop_back();
    }
}

} // namespace

SigmaAlphabet build_sigma(int num_events, int m) {
    if (m < 1) throw std::invalid_argument("build_sigma: m must be at least 1");
    if (num_events < 1) throw std::invalid_argument("build_sigma: no events");
    SigmaAlphabet sigma;
    sigma.m = m;
    ObsMultiset cur;
    for (int size = 1; size <= m; ++size)
        enumerate_multisets(num_events, size, 0, cur, sigma.symbols);
    for (size_t i = 0; i < sigma.symbols.size(); ++i)
        sigma.index.emplace(sigma.symbols[i], static_cast<int>(i));
    return sigma;
}

SensorAlteration SensorAlteration::identity(int num_events) {
    SensorAlteration a;
    a.to.resize(num_events);
    for (int y = 0; y < num_events; ++y) a.to[y] = y;
    return a;
}

CostFunction CostFunction::unit(int num_events) {
    CostFunction c;
    c.num_events = num_events;
    c.table.assign(static_cast<size_t>(num_events) * num_events, Cost(Rational(1)));
    for (int y = 0; y < num_events; ++y) c.at(y, y) = Cost(Rational(0));
    return c;
}

Cost total_cost(const SensorAlteration& a, const CostFunction& c) {
    if (static_cast<int>(a.to.size()) != c.num_events)
        throw std::invalid_argument("total_cost: domain mismatch");
    Cost sum{Rational(0)};
    for (int y = 0; y < c.num_events; ++y) sum += c.at(y, a.to[y]);
    return sum;
}

ObsMultiset altered_observation(const SensorAlteration& a, const WorldGraph& g, int edge) {
    if (edge < 0 || edge >= static_cast<int>(g.edges.size()))
        throw std::invalid_argument("altered_observation: unknown edge");
    std::map<int, int> counts;
    for (int y : g.edges[edge].obs) counts[a.to[y]]++;
    ObsMultiset m;
    m.items.assign(counts.begin(), counts.end());
    return m;
}

std::vector<ObsMultiset> altered_observe(const SensorAlteration& a, const WorldGraph& g,
                                         const Walk& r) {
    if (!is_walk(g, r)) throw std::invalid_argument("altered_observe: not a walk");
    std::vector<ObsMultiset> out;
    out.reserve(r.size());
    for (int e : r) out.push_back(altered_observation(a, g, e));
    return out;
}

std::vector<int> realizable_set(const WorldGraph& g, const SigmaAlphabet& sigma) {
    std::vector<int> z;
    for (auto& e : g.edges) {
        int id = sigma.id_of(ObsMultiset::from_set(e.obs));
        if (id < 0) throw std::invalid_argument("realizable_set: edge observation outside Sigma");
        z.push_back(id);
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

int multiplicity(int event, const ObsMultiset& x) {
    for (auto& [e, k] : x.items)
        if (e == event) return k;
    return 0;
}

} // namespace deceptiplan
