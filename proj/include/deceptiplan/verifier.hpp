#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "deceptiplan/alteration.hpp"

namespace deceptiplan {

// A full planning problem: world, itinerary and deviation DFAs over the edge
// alphabet, and the alteration cost table. The derived machinery (Sigma, Z,
// the products P and M, the outside acceptor O with its sink) is built once
// and cached; everything is immutable afterwards. Call ensure_built() before
// sharing an instance across threads — concurrent queries on a built instance
// are safe, the lazy build itself is not synchronized.
struct DeceptionInstance {
    WorldGraph world;
    Fa itinerary; // total DFA over edge ids
    Fa deviation; // total DFA over edge ids
    CostFunction cost;

    // derived, filled by ensure_built()
    bool built = false;
    SigmaAlphabet sigma;
    std::vector<int> zset;          // realizable observation symbols, sorted
    Fa itinerary_product;           // P = itinerary x world (partial DFA over E)
    Fa deviation_product;           // M = deviation x world (partial DFA over E)
    Fa outside;                     // O: total minimized DFA over Sigma, L(O) = complement of L(P-relaxed)
    State outside_sink = -1;        // q_sink of O

    void ensure_built();
};

// Observation relaxation of an edge-labeled partial DFA: an NFA over Sigma
// whose transitions regroup edges by their (possibly altered) observation.
Fa relax_itinerary(const Fa& p, const WorldGraph& g, const SigmaAlphabet& sigma);
Fa relax_deviation(const Fa& m, const WorldGraph& g, const SensorAlteration& a,
                   const SigmaAlphabet& sigma);

// O = minimize(complement(determinize(relax_itinerary(P)))) plus the unique
// accepting sink that absorbs every non-realizable observation. Throws if the
// sink cannot be identified (the relaxation language is prefix-closed, so a
// missing sink indicates a construction bug or a degenerate Sigma == Z world).
std::pair<Fa, State> build_outside_acceptor(const Fa& itinerary_product, const WorldGraph& g,
                                            const SigmaAlphabet& sigma, const std::vector<int>& zset);

struct DeceptionVerdict {
    bool deceptive = true;
    // present iff not deceptive: a deviation walk and its altered observation
    // sequence accepted by the outside acceptor
    Walk witness_walk;
    std::vector<int> witness_obs; // sigma symbol ids
};

DeceptionVerdict is_deceptive(DeceptionInstance& instance, const SensorAlteration& a);

enum class PlanStatus { Optimal, Infeasible };

struct PlanResult {
    PlanStatus status = PlanStatus::Infeasible;
    SensorAlteration alteration;
    Cost cost = Cost::inf();
    std::string certificate;       // infeasible: note on how the search was exhausted
    std::uint64_t nodes_expanded = 0;
    double elapsed_seconds = 0.0;  // informational; omitted from structured output
};

// Exhaustive baseline: enumerates all |Y|^|Y| total maps in nondecreasing
// cost order (best-first over partial assignments, ties broken by event id)
// and returns the first deceptive one. Refuses instances whose map count
// exceeds the budget.
struct BruteForceBudget {
    std::uint64_t max_maps = 4000; // comfortable for |Y| <= 5
};

PlanResult brute_force_plan(DeceptionInstance& instance, BruteForceBudget budget = {});

} // namespace deceptiplan
