#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "deceptiplan/ilp.hpp"
#include "deceptiplan/multicut.hpp"

namespace deceptiplan {

struct ParseError {
    std::string message; // includes a location (byte offset or json path)
};

// One self-contained JSON document per instance. `//` comments are allowed so
// figure-derived fixtures can cite their source. Costs follow the
// identity-free default rule (diagonal 0, off-diagonal 1) with sparse
// overrides, "inf" allowed.
struct InstanceDoc {
    DeceptionInstance instance;
    std::optional<Rational> budget; // decision-variant threshold
};

InstanceDoc parse_instance(const std::string& text);
std::string print_instance(const DeceptionInstance& instance,
                           const std::optional<Rational>& budget = std::nullopt);

// Transcribed paper scenarios: department-row1..row6, grid-a, grid-b, grid-c,
// green-vault, fig4-multicut. Throws on unknown names.
InstanceDoc builtin_instance(const std::string& name);
std::vector<std::string> builtin_names();

// The fig4 multicut base instance (digraph + pairs) for `reduce` demos.
std::pair<Digraph, PairSet> fig4_multicut();

struct GenParams {
    int num_vertices = 4;
    int num_edges = 6;
    int num_events = 3;
    int m = 2;
    double itinerary_density = 0.5;
    double deviation_density = 0.5;
    std::uint64_t seed = 1;
    bool require_certifying = false;
    int certifying_attempts = 40;
};

// Deterministic under seed; always validates. When require_certifying is set,
// regenerates up to certifying_attempts times.
InstanceDoc gen_random(const GenParams& params);

// Plain-text digraph format: "node A", "arc A B", "pair A B" lines.
std::pair<Digraph, PairSet> parse_digraph(const std::string& text);

// Alteration map file: lines "from -> to" (or JSON object {"from":"to"}).
SensorAlteration parse_alteration(const std::string& text, const WorldGraph& world);

// Stable machine-readable result rendering (used by --format structured and
// golden tests). Solver wall time is deliberately excluded.
std::string structured_plan_result(const DeceptionInstance& instance, const PlanResult& result,
                                   const std::optional<Rational>& budget,
                                   const ModelStats* stats);
std::string structured_verdict(const DeceptionInstance& instance, const DeceptionVerdict& verdict);
std::string structured_certifying(const WorldGraph& world, const CertifyingVerdict& verdict);

} // namespace deceptiplan
