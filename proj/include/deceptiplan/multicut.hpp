#pragma once

#include <optional>
#include <vector>

#include "deceptiplan/verifier.hpp"

namespace deceptiplan {

// Simple directed graph for the multicut side of the reduction harness.
struct Digraph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> arcs;
    std::vector<std::string> node_names;
};

using PairSet = std::vector<std::pair<int, int>>; // ordered (source, target) list

// Adds a direct (s,t) arc for every pair with no path, returning the new
// graph, the unchanged pair set and k + |added|.
struct ConnectifyResult {
    Digraph graph;
    PairSet pairs;
    int k = 0;
    std::vector<int> added_arcs; // indices into graph.arcs
};
ConnectifyResult connectify(const Digraph& g, const PairSet& pairs, int k);

// Instance produced by the reduction, with the twin bookkeeping needed to
// pull a cut back out of an alteration.
struct ReducedInstance {
    DeceptionInstance instance;
    std::vector<int> red_event_of_arc;  // arc index -> event id of its red edge
    std::vector<int> blue_event_of_arc; // arc index -> event id of its blue twin
};

// Twin-edge encoding: blue/red edge pairs per arc, a fresh initial vertex
// wired to every source, one sensor/event per edge, an itinerary of blue-only
// rows and a two-column deviation requiring at least one red edge. The
// resulting optimum equals the minimum T-cut size. Requires every pair to be
// connected (run connectify first) and distinct endpoints.
ReducedInstance reduce_to_mcsd(const Digraph& g, const PairSet& pairs);

// Minimum-cardinality T-cut by increasing-size subset enumeration.
// nullopt when no cut exists (some pair has source == target).
struct MulticutBudget {
    int max_arcs = 20;
};
std::optional<int> brute_force_min_multicut(const Digraph& g, const PairSet& pairs,
                                            MulticutBudget budget = {});

// Arcs whose red event was altered to its twin at finite cost; a valid T-cut
// of size equal to the alteration cost whenever the alteration is deceptive.
std::vector<int> extract_cut(const ReducedInstance& reduced, const SensorAlteration& a);

bool is_tcut(const Digraph& g, const PairSet& pairs, const std::vector<int>& cut_arcs);

} // namespace deceptiplan
