#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "deceptiplan/verifier.hpp"

namespace deceptiplan {

// Variable families of the linearized program. Index meaning per kind:
//   A     (q, p)      reachability of (outside state, deviation-product state)
//   U     (y, y')     event y is altered to y'
//   N     (y, zi)     multiplicity of y in the zi-th realizable observation (fixed)
//   B     (zi, e, y)  0 iff O(e) maps onto exactly the y-occurrences of z
//   CMult (e, y)      how many events of O(e) map to y
//   L     (zi, e)     edge e produces the zi-th realizable observation
enum class VarKind : std::uint8_t { A, U, N, B, CMult, L };

struct VarId {
    VarKind kind;
    int i = 0, j = 0, k = 0;
};

enum class Rel : std::uint8_t { Le, Eq, Ge };

// Constraint families, named by role; these tags become LP row-name prefixes.
enum class Family : std::uint8_t {
    Init,       // a at the initial pair = 1
    Mapping,    // each event maps to exactly one target
    Forbidden,  // infinite-cost mappings fixed to 0
    Deceptive,  // accepting pairs unreachable
    MatchUb,    // big-M upper half: sum u - n <= M b
    MatchLb,    // big-M lower half: sum u - n >= -M b
    CountDef,   // c_{e,y} = sum of u into y from O(e)
    ProduceUb,  // big-M' upper half gating l
    ProduceLb,  // big-M' lower half gating l
    Advance,    // a_{q,p} <= 1 - l + a_{successor}
    Sink        // a_{q,p} <= a_{sink,...} + sum_l
};

const char* family_tag(Family f);

struct LinearConstraint {
    Family family;
    std::vector<std::pair<Rational, int>> terms; // (coefficient, dense var index)
    Rel rel;
    Rational rhs;
    std::string name; // tag_indices, unique per model
};

struct IlpModel {
    // family extents
    int nQO = 0, nQM = 0, nY = 0, nZ = 0, nE = 0;
    // dense layout offsets, in declaration order a, u, n, b, c, l
    size_t off_a = 0, off_u = 0, off_n = 0, off_b = 0, off_c = 0, off_l = 0;
    size_t num_vars = 0;

    struct VarInfo {
        std::string name;
        Rational lo, hi;
        bool integral = true;
        bool binary = false;
    };
    std::vector<VarInfo> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<std::pair<Rational, int>> objective;

    // metadata
    int big_m = 0, big_m_prime = 0;
    std::string big_m_derivation;
    State q_sink = -1;
    std::string instance_digest;
    bool pruned = false;
    std::vector<char> pair_alive; // when pruned: which (q,p) pairs carry variables

    // retained instance structure so the checker can evaluate the
    // pre-linearized logical family
    Fa outside;                    // total DFA over Sigma
    Fa deviation_product;          // partial DFA over E
    SigmaAlphabet sigma;
    std::vector<int> zset;
    std::vector<std::vector<int>> edge_obs; // O(e), sorted event ids
    CostFunction cost;

    size_t a_index(int q, int p) const { return off_a + static_cast<size_t>(q) * nQM + p; }
    size_t u_index(int y, int y2) const { return off_u + static_cast<size_t>(y) * nY + y2; }
    size_t n_index(int y, int zi) const { return off_n + static_cast<size_t>(y) * nZ + zi; }
    size_t b_index(int zi, int e, int y) const {
        return off_b + (static_cast<size_t>(zi) * nE + e) * nY + y;
    }
    size_t c_index(int e, int y) const { return off_c + static_cast<size_t>(e) * nY + y; }
    size_t l_index(int zi, int e) const { return off_l + static_cast<size_t>(zi) * nE + e; }

    VarId var_id(size_t dense) const;
};

struct BuildOptions {
    // Restrict a-variables to product pairs reachable under some alteration.
    // Off by default; the census matches the closed forms only when off.
    bool prune_unreachable_pairs = false;
    // Multiplies the derived (M, M') constants; the optimum must not depend
    // on it, which the regression suite exercises with a factor of 10.
    int big_m_scale = 1;
};

IlpModel build_model(DeceptionInstance& instance, BuildOptions opts = {});

// Provably sufficient big-M constants: M = m bounds |sum u - n|, M' = 2m
// bounds sum b + sum c. Returned with the derivation text.
std::pair<int, int> choose_big_m(const DeceptionInstance& instance);

std::string export_lp(const IlpModel& model);

// Minimal LP-format reader covering what export_lp emits; used to round-trip
// models in tests and to sanity-check exported files.
struct ParsedLp {
    std::vector<std::pair<Rational, std::string>> objective;
    struct Row {
        std::string name;
        std::vector<std::pair<Rational, std::string>> terms;
        Rel rel;
        Rational rhs;
    };
    std::vector<Row> rows;
    std::unordered_map<std::string, std::pair<Rational, Rational>> bounds;
    std::vector<std::string> binaries;
    std::vector<std::string> generals;
};
ParsedLp parse_lp(const std::string& text);

using Assignment = std::vector<Rational>; // dense, indexed like IlpModel vars

struct CheckReport {
    struct Violation {
        std::string constraint;
        Rational lhs;
        Rel rel;
        Rational rhs;
    };
    std::vector<Violation> violations;   // linearized families
    bool linear_satisfied = true;
    bool logical_satisfied = true;       // pre-linearized implication program
    std::vector<std::string> logical_violations;
    bool divergence() const { return linear_satisfied != logical_satisfied; }
};

CheckReport check_assignment(const IlpModel& model, const Assignment& assignment);

// Canonical assignment induced by an alteration: truthful u/n/b/c/l values and
// the least fixed point of the advance+sink propagation for the a-family.
Assignment assignment_from_alteration(const IlpModel& model, const SensorAlteration& a);

struct SolveOptions {
    bool prune_unreachable_pairs = false; // forwarded to cross-validation model
    bool cross_validate = true;           // re-check optimum via check_assignment
    std::uint64_t node_limit = 0;         // 0 = unlimited
};

// Exact best-first branch-and-bound over the alteration rows; leaf
// feasibility is the automata-theoretic deceptiveness check, partial nodes
// are pruned when already-determined edges force an accepting product pair.
PlanResult solve(DeceptionInstance& instance, SolveOptions opts = {});

struct ModelStats {
    std::unordered_map<std::string, size_t> variable_counts;   // per family
    std::unordered_map<std::string, size_t> constraint_counts; // per family tag
};

ModelStats model_stats(const IlpModel& model);

} // namespace deceptiplan
