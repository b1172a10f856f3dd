#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace deceptiplan {

struct WorldGraph;

// Symbols are dense indices into whatever alphabet the caller fixed
// (edge ids of a world graph, or observation-multiset ids).
using Symbol = int;
using State = int;
using Word = std::vector<Symbol>;

enum class FaKind { Nfa, DfaTotal, DfaPartial };

// One automaton type covers NFAs, total DFAs and partial DFAs; `kind`
// selects which invariants hold. NFAs use the sparse `moves` table, DFAs
// the dense `delta` table (-1 marks an undefined transition of a partial
// DFA). Instances are immutable after construction: every operation below
// is a pure function returning a fresh automaton.
struct Fa {
    FaKind kind = FaKind::Nfa;
    int num_states = 0;
    int num_symbols = 0;
    State initial = 0;
    std::vector<char> accepting;

    // kind == Nfa: moves[s] holds (symbol, sorted targets), sorted by symbol.
    std::vector<std::vector<std::pair<Symbol, std::vector<State>>>> moves;
    // kind != Nfa: delta[s * num_symbols + x].
    std::vector<State> delta;

    State dfa_next(State s, Symbol x) const { return delta[static_cast<size_t>(s) * num_symbols + x]; }

    const std::vector<State>* nfa_targets(State s, Symbol x) const;

    static Fa single_state(int num_symbols, bool accept); // total DFA, all self-loops
    static Fa empty_language(int num_symbols);            // total DFA accepting nothing
};

// Verdict of an emptiness test; `witness` is the shortest accepted word
// (symbol order breaks ties, so it is deterministic).
struct EmptinessVerdict {
    bool empty = true;
    Word witness;
};

// Subset construction. Subset states are canonical sorted lists, explored
// breadth-first, so the output numbering is reproducible. The empty subset
// is materialized as a rejecting sink only when some transition needs it.
Fa determinize(const Fa& a);

// Moore partition refinement; rejects anything that is not a total DFA.
// Unreachable states are dropped first, classes renumbered by BFS order.
Fa minimize(const Fa& dfa);

// Flips the accepting set of a total DFA. Partial DFAs are rejected:
// totalize through an explicit sink before complementing.
Fa complement(const Fa& dfa);

// Adds a rejecting sink to a partial DFA (identity on total DFAs).
Fa totalize(const Fa& dfa);

// Def-9 style product of a total DFA over edge ids with a world graph:
// a partial DFA over edge ids whose transitions follow edges leaving the
// current vertex. Only states reachable from (initial, v0) are kept.
Fa product_with_world(const Fa& a, const WorldGraph& g);

// Reachability over the synchronous product; returns the shortest witness
// of nonemptiness of L(a) ∩ L(b).
EmptinessVerdict intersect_empty(const Fa& a, const Fa& b);

bool accepts(const Fa& a, const Word& w);

// ---------------------------------------------------------------------------
// Regular expressions (literals, concatenation, alternation, Kleene star,
// epsilon). Epsilon transitions exist only inside the compiler here and
// never escape this module.

struct RegexExpr {
    enum class Node { Literal, Epsilon, Concat, Alt, Star };
    Node node;
    Symbol symbol = -1; // Literal
    std::unique_ptr<RegexExpr> lhs, rhs;

    static std::unique_ptr<RegexExpr> literal(Symbol s);
    static std::unique_ptr<RegexExpr> epsilon();
    static std::unique_ptr<RegexExpr> concat(std::unique_ptr<RegexExpr> a, std::unique_ptr<RegexExpr> b);
    static std::unique_ptr<RegexExpr> alt(std::unique_ptr<RegexExpr> a, std::unique_ptr<RegexExpr> b);
    static std::unique_ptr<RegexExpr> star(std::unique_ptr<RegexExpr> a);
};

struct RegexError {
    size_t position = 0;
    std::string message;
};

// Concrete syntax: whitespace-separated symbol names, `|`, `*`, parentheses,
// and the reserved word `eps` for the empty word. Juxtaposition concatenates.
// `alphabet` maps symbol names to ids; unknown names are diagnosed with their
// text position.
std::unique_ptr<RegexExpr> parse_regex(const std::string& text,
                                       const std::vector<std::string>& alphabet,
                                       RegexError* error);

// Thompson construction, epsilon elimination, then determinization.
Fa regex_to_dfa(const RegexExpr& r, int num_symbols);

} // namespace deceptiplan
