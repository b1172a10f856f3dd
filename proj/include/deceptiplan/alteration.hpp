#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "deceptiplan/rational.hpp"
#include "deceptiplan/world.hpp"

namespace deceptiplan {

// Multiset of events in canonical form: (event id, multiplicity) pairs
// sorted by event id, multiplicities >= 1. Cardinality counts multiplicity.
struct ObsMultiset {
    std::vector<std::pair<int, int>> items;

    int cardinality() const {
        int n = 0;
        for (auto& [e, k] : items) n += k;
        return n;
    }
    bool operator==(const ObsMultiset& o) const { return items == o.items; }
    bool operator<(const ObsMultiset& o) const;

    static ObsMultiset from_set(const std::vector<int>& sorted_events);
};

struct ObsMultisetHash {
    size_t operator()(const ObsMultiset& m) const {
        size_t h = 1469598103934665603ull;
        for (auto& [e, k] : m.items) {
            h = (h ^ static_cast<size_t>(e)) * 1099511628211ull;
            h = (h ^ static_cast<size_t>(k)) * 1099511628211ull;
        }
        return h;
    }
};

// The observation alphabet: all event multisets of cardinality 1..m. Symbol
// ids are positions in `symbols`, ordered by (cardinality, lexicographic
// content) so they are stable across runs.
struct SigmaAlphabet {
    int m = 0;
    std::vector<ObsMultiset> symbols;
    std::unordered_map<ObsMultiset, int, ObsMultisetHash> index;

    int id_of(const ObsMultiset& x) const {
        auto it = index.find(x);
        return it == index.end() ? -1 : it->second;
    }
};

SigmaAlphabet build_sigma(int num_events, int m);

// Total event remap. No suppression: the codomain is Y itself.
struct SensorAlteration {
    std::vector<int> to; // event -> event

    static SensorAlteration identity(int num_events);
};

struct CostFunction {
    int num_events = 0;
    std::vector<Cost> table; // row-major num_events x num_events

    const Cost& at(int from, int to) const { return table[static_cast<size_t>(from) * num_events + to]; }
    Cost& at(int from, int to) { return table[static_cast<size_t>(from) * num_events + to]; }

    // default rule: c(y,y)=0, c(y,y')=1
    static CostFunction unit(int num_events);
};

Cost total_cost(const SensorAlteration& a, const CostFunction& c);

// Multiset image of O(e) under the alteration; cardinality is preserved.
ObsMultiset altered_observation(const SensorAlteration& a, const WorldGraph& g, int edge);

std::vector<ObsMultiset> altered_observe(const SensorAlteration& a, const WorldGraph& g, const Walk& r);

// Z = { O(e) | e in E } as sigma symbol ids, sorted.
std::vector<int> realizable_set(const WorldGraph& g, const SigmaAlphabet& sigma);

int multiplicity(int event, const ObsMultiset& x);

} // namespace deceptiplan
