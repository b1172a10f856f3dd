#include <doctest.h>

#include <functional>
#include <random>

#include "deceptiplan/automata.hpp"
#include "deceptiplan/world.hpp"

using namespace deceptiplan;

namespace {

// Independent regex oracle: positions reachable in `word` after matching r
// starting from `from`, by structural recursion (no automata involved).
void match_positions(const RegexExpr& r, const Word& word, size_t from, std::vector<char>& out);

void star_positions(const RegexExpr& inner, const Word& word, size_t from, std::vector<char>& seen) {
    if (seen[from]) return;
    seen[from] = 1;
    std::vector<char> step(word.size() + 1, 0);
    match_positions(inner, word, from, step);
    for (size_t p = 0; p <= word.size(); ++p)
        if (step[p]) star_positions(inner, word, p, seen);
}

void match_positions(const RegexExpr& r, const Word& word, size_t from, std::vector<char>& out) {
    switch (r.node) {
        case RegexExpr::Node::Literal:
            if (from < word.size() && word[from] == r.symbol) out[from + 1] = 1;
            break;
        case RegexExpr::Node::Epsilon:
            out[from] = 1;
            break;
        case RegexExpr::Node::Concat: {
            std::vector<char> mid(word.size() + 1, 0);
            match_positions(*r.lhs, word, from, mid);
            for (size_t p = 0; p <= word.size(); ++p)
                if (mid[p]) match_positions(*r.rhs, word, p, out);
            break;
        }
        case RegexExpr::Node::Alt:
            match_positions(*r.lhs, word, from, out);
            match_positions(*r.rhs, word, from, out);
            break;
        case RegexExpr::Node::Star: {
            std::vector<char> seen(word.size() + 1, 0);
            star_positions(*r.lhs, word, from, seen);
            for (size_t p = 0; p <= word.size(); ++p)
                if (seen[p]) out[p] = 1;
            break;
        }
    }
}

bool regex_matches(const RegexExpr& r, const Word& word) {
    std::vector<char> out(word.size() + 1, 0);
    match_positions(r, word, 0, out);
    return out[word.size()];
}

Fa random_nfa(std::mt19937& rng, int states, int symbols) {
    Fa a;
    a.kind = FaKind::Nfa;
    a.num_states = states;
    a.num_symbols = symbols;
    a.initial = 0;
    a.accepting.resize(states);
    for (auto& f : a.accepting) f = rng() % 3 == 0;
    a.moves.resize(states);
    for (int s = 0; s < states; ++s)
        for (int x = 0; x < symbols; ++x) {
            std::vector<int> ts;
            for (int t = 0; t < states; ++t)
                if (rng() % 3 == 0) ts.push_back(t);
            if (!ts.empty()) a.moves[s].push_back({x, ts});
        }
    return a;
}

void each_word(int symbols, int max_len, const std::function<void(const Word&)>& f) {
    Word w;
    std::function<void(int)> rec = [&](int remaining) {
        f(w);
        if (remaining == 0) return;
        for (int x = 0; x < symbols; ++x) {
            w.push_back(x);
            rec(remaining - 1);
            w.pop_back();
        }
    };
    rec(max_len);
}

} // namespace

TEST_CASE("determinize keeps the language and is idempotent on DFAs") {
    // a+ over a unary alphabet
    Fa nfa;
    nfa.kind = FaKind::Nfa;
    nfa.num_states = 2;
    nfa.num_symbols = 1;
    nfa.initial = 0;
    nfa.accepting = {0, 1};
    nfa.moves = {{{0, {0, 1}}}, {}};
    Fa d = determinize(nfa);
    CHECK(d.kind == FaKind::DfaTotal);
    CHECK(d.num_states == 2); // {q0} and {q0,q1}, no sink needed
    CHECK_FALSE(accepts(d, {}));
    CHECK(accepts(d, {0}));
    CHECK(accepts(d, {0, 0, 0, 0}));

    Fa dd = determinize(d);
    CHECK(dd.num_states == d.num_states);

    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
        Fa a = random_nfa(rng, 2 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 3));
        Fa det = determinize(a);
        int max_len = a.num_states + 2;
        each_word(a.num_symbols, max_len,
                  [&](const Word& w) { CHECK(accepts(a, w) == accepts(det, w)); });
    }
}

TEST_CASE("complement flips acceptance and is an involution") {
    std::mt19937 rng(11);
    Fa a = determinize(random_nfa(rng, 4, 2));
    Fa c = complement(a);
    Fa cc = complement(c);
    CHECK(cc.accepting == a.accepting);
    each_word(2, 5, [&](const Word& w) { CHECK(accepts(a, w) != accepts(c, w)); });

    Fa all = Fa::single_state(2, true);
    Fa none = complement(all);
    each_word(2, 3, [&](const Word& w) { CHECK_FALSE(accepts(none, w)); });

    Fa partial = all;
    partial.kind = FaKind::DfaPartial;
    CHECK_THROWS(complement(partial));
}

TEST_CASE("minimize merges equivalent states and preserves the language") {
    // two separate accepting states with identical behavior
    Fa a;
    a.kind = FaKind::DfaTotal;
    a.num_states = 3;
    a.num_symbols = 1;
    a.initial = 0;
    a.accepting = {0, 1, 1};
    a.delta = {1, 2, 1}; // q0 -a-> q1 -a-> q2 -a-> q1
    Fa m = minimize(a);
    CHECK(m.num_states == 2);
    each_word(1, 6, [&](const Word& w) { CHECK(accepts(a, w) == accepts(m, w)); });

    Fa already = Fa::single_state(3, true);
    CHECK(minimize(already).num_states == 1);
    std::mt19937 nfa_rng(3);
    CHECK_THROWS(minimize(random_nfa(nfa_rng, 3, 2)));

    std::mt19937 rng(23);
    for (int round = 0; round < 30; ++round) {
        Fa d = determinize(random_nfa(rng, 2 + static_cast<int>(rng() % 4), 2));
        Fa md = minimize(d);
        CHECK(md.num_states <= d.num_states);
        CHECK(minimize(md).num_states == md.num_states); // idempotent
        // language equality through symmetric-difference emptiness
        CHECK(intersect_empty(md, complement(d)).empty);
        CHECK(intersect_empty(d, complement(md)).empty);
        // minimality: every pair of result states is distinguishable
        for (State s1 = 0; s1 < md.num_states; ++s1)
            for (State s2 = s1 + 1; s2 < md.num_states; ++s2) {
                Fa from1 = md, from2 = md;
                from1.initial = s1;
                from2.initial = s2;
                bool distinguishable = !intersect_empty(from1, complement(from2)).empty ||
                                       !intersect_empty(from2, complement(from1)).empty;
                CHECK(distinguishable);
            }
    }
}

TEST_CASE("intersect_empty returns shortest witnesses") {
    Fa empty = Fa::empty_language(2);
    Fa anything = Fa::single_state(2, true);
    CHECK(intersect_empty(empty, anything).empty);

    auto verdict = intersect_empty(anything, anything);
    CHECK_FALSE(verdict.empty);
    CHECK(verdict.witness.empty()); // epsilon, both initials accepting

    // mismatched alphabets are rejected
    CHECK_THROWS(intersect_empty(anything, Fa::single_state(3, true)));

    // language "aa" against "a(a|b)": witness must be aa
    std::vector<std::string> alpha = {"a", "b"};
    RegexError err;
    Fa left = regex_to_dfa(*parse_regex("a a", alpha, &err), 2);
    Fa right = regex_to_dfa(*parse_regex("a (a|b)", alpha, &err), 2);
    auto v2 = intersect_empty(left, right);
    CHECK_FALSE(v2.empty);
    CHECK(v2.witness == Word{0, 0});
}

TEST_CASE("accepts handles NFAs, partial DFAs and rejects foreign symbols") {
    Fa all = Fa::single_state(1, true);
    CHECK(accepts(all, {}));
    CHECK_THROWS(accepts(all, {5}));

    Fa rejecting = Fa::empty_language(2);
    each_word(2, 3, [&](const Word& w) { CHECK_FALSE(accepts(rejecting, w)); });

    Fa partial;
    partial.kind = FaKind::DfaPartial;
    partial.num_states = 2;
    partial.num_symbols = 2;
    partial.initial = 0;
    partial.accepting = {0, 1};
    partial.delta = {1, -1, -1, -1};
    CHECK(accepts(partial, {0}));
    CHECK_FALSE(accepts(partial, {1}));   // undefined transition rejects
    CHECK_FALSE(accepts(partial, {0, 0}));
}

TEST_CASE("regex parsing diagnoses malformed input with positions") {
    std::vector<std::string> alpha = {"e1", "e2"};
    RegexError err;
    CHECK(parse_regex("(e1|e2)*", alpha, &err) != nullptr);
    CHECK(parse_regex("eps", alpha, &err) != nullptr);

    CHECK(parse_regex("(e1|e3)", alpha, &err) == nullptr);
    CHECK(err.message.find("e3") != std::string::npos);
    CHECK(err.position == 4);

    CHECK(parse_regex("(e1", alpha, &err) == nullptr);
    CHECK(err.position == 0);

    CHECK(parse_regex("*e1", alpha, &err) == nullptr);
}

TEST_CASE("regex_to_dfa agrees with a structural matcher") {
    std::vector<std::string> alpha = {"e17", "e19", "e21", "e22", "e23", "e24", "e18", "e20"};
    RegexError err;
    auto ast = parse_regex("(e17|e19)(e21|e22|e23|e24)*(e18|e20)", alpha, &err);
    REQUIRE(ast != nullptr);
    Fa d = regex_to_dfa(*ast, static_cast<int>(alpha.size()));

    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        Word w(rng() % 6);
        for (auto& x : w) x = static_cast<Symbol>(rng() % alpha.size());
        CHECK(accepts(d, w) == regex_matches(*ast, w));
    }

    // exhaustive agreement on small alphabets, words up to length 6
    std::vector<std::string> small = {"a", "b", "c"};
    for (const char* pattern : {"a b c", "(a|b)*", "a (b|eps) c*", "((a b)|c)* a", "eps|a a a"}) {
        auto r = parse_regex(pattern, small, &err);
        REQUIRE(r != nullptr);
        Fa dd = regex_to_dfa(*r, 3);
        each_word(3, 6, [&](const Word& w) { CHECK(accepts(dd, w) == regex_matches(*r, w)); });
    }

    // single-word language
    std::vector<std::string> dep = {"e9", "e25"};
    auto word = parse_regex("e9 e25", dep, &err);
    Fa dw = regex_to_dfa(*word, 2);
    CHECK(accepts(dw, {0, 1}));
    CHECK_FALSE(accepts(dw, {0}));
    CHECK_FALSE(accepts(dw, {1, 0}));

    // all-accepting star minimizes to a single state
    auto star = parse_regex("(a|b|c)*", small, &err);
    CHECK(minimize(regex_to_dfa(*star, 3)).num_states == 1);
}

TEST_CASE("product_with_world restricts to walks") {
    WorldGraph g;
    g.num_vertices = 2;
    g.initial_vertex = 0;
    g.num_events = 1;
    g.num_sensors = 1;
    g.event_sensor = {0};
    g.sensor_events = {{0}};
    g.vertex_names = {"v0", "v1"};
    g.event_names = {"y"};
    g.sensor_names = {"s"};
    g.edges.push_back({0, 1, {0}});
    g.edge_names = {"e1"};

    Fa only_e1 = regex_to_dfa(*RegexExpr::literal(0), 1);
    Fa p = product_with_world(only_e1, g);
    CHECK(p.kind == FaKind::DfaPartial);
    CHECK(accepts(p, {0}));
    CHECK_FALSE(accepts(p, {}));
    CHECK_FALSE(accepts(p, {0, 0})); // no edge leaves v1

    // itinerary accepting everything restricted to walks
    Fa all = Fa::single_state(1, true);
    Fa pw = product_with_world(all, g);
    CHECK(accepts(pw, {}));
    CHECK(accepts(pw, {0}));
    CHECK_FALSE(accepts(pw, {0, 0}));
}
