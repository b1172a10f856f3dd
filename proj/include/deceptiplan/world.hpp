#pragma once

#include <string>
#include <vector>

#include "deceptiplan/automata.hpp"

namespace deceptiplan {

// Events, sensors, vertices and edges are interned to dense ints; the name
// tables exist for interchange and diagnostics.
struct WorldGraph {
    int num_vertices = 0;
    State initial_vertex = 0;

    struct Edge {
        int src = 0;
        int tgt = 0;
        std::vector<int> obs; // sorted event ids, nonempty
    };
    std::vector<Edge> edges;

    int num_events = 0;
    int num_sensors = 0;
    std::vector<int> event_sensor;              // event -> owning sensor
    std::vector<std::vector<int>> sensor_events; // sensor -> sorted event ids

    std::vector<std::string> vertex_names;
    std::vector<std::string> edge_names;
    std::vector<std::string> event_names;
    std::vector<std::string> sensor_names;

    int max_simultaneous() const; // m = max |O(e)|
};

// A walk is a (possibly empty) edge sequence from the initial vertex.
using Walk = std::vector<int>;

// Structural invariant check; violations come back as diagnostics naming the
// offending element, never as exceptions.
std::vector<std::string> validate(const WorldGraph& g);

bool is_walk(const WorldGraph& g, const Walk& seq);

// O(r): the per-edge observation sets along a walk.
std::vector<std::vector<int>> observe(const WorldGraph& g, const Walk& r);

struct CertifyingVerdict {
    bool certifying = true;
    Walk inside;  // walk in L(itinerary)
    Walk outside; // walk with equal observations outside L(itinerary)
};

// Decides whether observation sequences separate itinerary walks from all
// other walks, via observation relaxations of itinerary x world and
// complement(itinerary) x world. On failure returns the shortest
// equal-observation walk pair.
CertifyingVerdict is_certifying(const WorldGraph& g, const Fa& itinerary);

} // namespace deceptiplan
