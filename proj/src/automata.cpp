#include "deceptiplan/automata.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "deceptiplan/world.hpp"

namespace deceptiplan {

namespace {

struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
        size_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
        return h;
    }
};

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

const std::vector<State>* Fa::nfa_targets(State s, Symbol x) const {
    auto& row = moves[s];
    auto it = std::lower_bound(row.begin(), row.end(), x,
                               [](const auto& p, Symbol v) { return p.first < v; });
    if (it == row.end() || it->first != x) return nullptr;
    return &it->second;
}

Fa Fa::single_state(int num_symbols, bool accept) {
    Fa a;
    a.kind = FaKind::DfaTotal;
    a.num_states = 1;
    a.num_symbols = num_symbols;
    a.initial = 0;
    a.accepting = {static_cast<char>(accept)};
    a.delta.assign(static_cast<size_t>(num_symbols), 0);
    return a;
}

Fa Fa::empty_language(int num_symbols) { return single_state(num_symbols, false); }

Fa determinize(const Fa& a) {
    require(a.num_symbols > 0, "determinize: empty alphabet");
    const int ns = a.num_symbols;

    auto step = [&](const std::vector<State>& subset, Symbol x) {
        std::vector<State> out;
        if (a.kind == FaKind::Nfa) {
            for (State s : subset) {
                if (const auto* ts = a.nfa_targets(s, x)) out.insert(out.end(), ts->begin(), ts->end());
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        } else {
            for (State s : subset) {
                State t = a.dfa_next(s, x);
                if (t >= 0) out.push_back(t);
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
        return out;
    };

    Fa d;
    d.kind = FaKind::DfaTotal;
    d.num_symbols = ns;
    d.initial = 0;

    std::unordered_map<std::vector<int>, State, VecHash> ids;
    std::vector<std::vector<State>> subsets;
    std::deque<State> work;

    auto intern = [&](std::vector<State> subset) {
        auto it = ids.find(subset);
        if (it != ids.end()) return it->second;
        State id = static_cast<State>(subsets.size());
        ids.emplace(subset, id);
        subsets.push_back(std::move(subset));
        work.push_back(id);
        return id;
    };

    intern({a.initial});
    std::vector<std::vector<State>> table; // per state, per symbol
    while (!work.empty()) {
        State cur = work.front();
        work.pop_front();
        std::vector<State> row(ns);
        for (Symbol x = 0; x < ns; ++x) row[x] = intern(step(subsets[cur], x));
        if (static_cast<size_t>(cur) >= table.size()) table.resize(cur + 1);
        table[cur] = std::move(row);
    }

    d.num_states = static_cast<int>(subsets.size());
    d.accepting.assign(d.num_states, 0);
    for (int s = 0; s < d.num_states; ++s)
        for (State q : subsets[s])
            if (a.accepting[q]) { d.accepting[s] = 1; break; }
    d.delta.assign(static_cast<size_t>(d.num_states) * ns, 0);
    table.resize(d.num_states);
    for (int s = 0; s < d.num_states; ++s)
        for (Symbol x = 0; x < ns; ++x) d.delta[static_cast<size_t>(s) * ns + x] = table[s][x];
    return d;
}

Fa minimize(const Fa& dfa) {
    require(dfa.kind == FaKind::DfaTotal, "minimize: requires a total DFA");
    const int ns = dfa.num_symbols;

    // reachable states only
    std::vector<State> order;
    std::vector<int> index(dfa.num_states, -1);
    order.push_back(dfa.initial);
    index[dfa.initial] = 0;
    for (size_t i = 0; i < order.size(); ++i)
        for (Symbol x = 0; x < ns; ++x) {
            State t = dfa.dfa_next(order[i], x);
            if (index[t] < 0) {
                index[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }

    const int n = static_cast<int>(order.size());
    std::vector<int> cls(n);
    for (int i = 0; i < n; ++i) cls[i] = dfa.accepting[order[i]] ? 1 : 0;

    // Moore refinement until stable
    while (true) {
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> sig;
            sig.reserve(ns + 1);
            sig.push_back(cls[i]);
            for (Symbol x = 0; x < ns; ++x) sig.push_back(cls[index[dfa.dfa_next(order[i], x)]]);
            auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            next[i] = it->second;
        }
        bool changed = false;
        for (int i = 0; i < n && !changed; ++i) changed = next[i] != cls[i];
        // also changed if the number of classes grew
        if (sig_ids.size() != static_cast<size_t>(*std::max_element(cls.begin(), cls.end())) + 1)
            changed = true;
        cls = std::move(next);
        if (!changed) break;
    }

    // renumber classes in BFS order from the initial class
    int nclasses = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<int> rep(nclasses, -1);
    for (int i = 0; i < n; ++i)
        if (rep[cls[i]] < 0) rep[cls[i]] = i;

    std::vector<int> renum(nclasses, -1);
    std::vector<int> bfs;
    renum[cls[0]] = 0;
    bfs.push_back(cls[0]);
    for (size_t i = 0; i < bfs.size(); ++i) {
        int c = bfs[i];
        for (Symbol x = 0; x < ns; ++x) {
            int t = cls[index[dfa.dfa_next(order[rep[c]], x)]];
            if (renum[t] < 0) {
                renum[t] = static_cast<int>(bfs.size());
                bfs.push_back(t);
            }
        }
    }

    Fa out;
    out.kind = FaKind::DfaTotal;
    out.num_symbols = ns;
    out.num_states = nclasses;
    out.initial = 0;
    out.accepting.assign(nclasses, 0);
    out.delta.assign(static_cast<size_t>(nclasses) * ns, 0);
    for (int c = 0; c < nclasses; ++c) {
        int i = rep[c];
        int id = renum[c];
        out.accepting[id] = dfa.accepting[order[i]];
        for (Symbol x = 0; x < ns; ++x)
            out.delta[static_cast<size_t>(id) * ns + x] = renum[cls[index[dfa.dfa_next(order[i], x)]]];
    }
    return out;
}

Fa complement(const Fa& dfa) {
    require(dfa.kind == FaKind::DfaTotal, "complement: requires a total DFA");
    Fa out = dfa;
    for (auto& f : out.accepting) f = !f;
    return out;
}

Fa totalize(const Fa& dfa) {
    require(dfa.kind != FaKind::Nfa, "totalize: requires a DFA");
    if (dfa.kind == FaKind::DfaTotal) return dfa;
    bool needs_sink = false;
    for (State t : dfa.delta)
        if (t < 0) { needs_sink = true; break; }
    Fa out = dfa;
    out.kind = FaKind::DfaTotal;
    if (!needs_sink) return out;
    State sink = out.num_states++;
    out.accepting.push_back(0);
    for (auto& t : out.delta)
        if (t < 0) t = sink;
    out.delta.resize(static_cast<size_t>(out.num_states) * out.num_symbols, sink);
    return out;
}

Fa product_with_world(const Fa& a, const WorldGraph& g) {
    require(a.kind == FaKind::DfaTotal, "product_with_world: itinerary side must be a total DFA");
    require(a.num_symbols == static_cast<int>(g.edges.size()),
            "product_with_world: alphabet must be the edge set of the world graph");
    const int ne = a.num_symbols;

    std::unordered_map<long long, State> ids;
    std::vector<std::pair<State, int>> states; // (dfa state, vertex)
    std::deque<State> work;
    auto intern = [&](State q, int v) {
        long long key = static_cast<long long>(q) * g.num_vertices + v;
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        State id = static_cast<State>(states.size());
        ids.emplace(key, id);
        states.push_back({q, v});
        work.push_back(id);
        return id;
    };

    intern(a.initial, g.initial_vertex);
    std::vector<std::vector<State>> table;
    while (!work.empty()) {
        State cur = work.front();
        work.pop_front();
        auto [q, v] = states[cur];
        std::vector<State> row(ne, -1);
        for (int e = 0; e < ne; ++e) {
            if (g.edges[e].src != v) continue;
            row[e] = intern(a.dfa_next(q, e), g.edges[e].tgt);
        }
        if (static_cast<size_t>(cur) >= table.size()) table.resize(cur + 1);
        table[cur] = std::move(row);
    }

    Fa p;
    p.kind = FaKind::DfaPartial;
    p.num_symbols = ne;
    p.num_states = static_cast<int>(states.size());
    p.initial = 0;
    p.accepting.assign(p.num_states, 0);
    for (int s = 0; s < p.num_states; ++s) p.accepting[s] = a.accepting[states[s].first];
    p.delta.assign(static_cast<size_t>(p.num_states) * ne, -1);
    table.resize(p.num_states);
    for (int s = 0; s < p.num_states; ++s)
        for (int e = 0; e < ne; ++e) p.delta[static_cast<size_t>(s) * ne + e] = table[s][e];
    return p;
}

EmptinessVerdict intersect_empty(const Fa& a, const Fa& b) {
    require(a.num_symbols == b.num_symbols, "intersect_empty: alphabet mismatch");
    Fa da = a.kind == FaKind::Nfa ? determinize(a) : totalize(a);
    Fa db = b.kind == FaKind::Nfa ? determinize(b) : totalize(b);
    const int ns = da.num_symbols;

    std::unordered_map<long long, int> seen;
    std::vector<std::pair<State, State>> nodes;
    std::vector<std::pair<int, Symbol>> parent; // (node index, symbol)
    std::deque<int> work;
    auto push = [&](State x, State y, int par, Symbol via) {
        long long key = static_cast<long long>(x) * db.num_states + y;
        if (seen.count(key)) return;
        seen.emplace(key, static_cast<int>(nodes.size()));
        nodes.push_back({x, y});
        parent.push_back({par, via});
        work.push_back(static_cast<int>(nodes.size()) - 1);
    };

    push(da.initial, db.initial, -1, -1);
    while (!work.empty()) {
        int cur = work.front();
        work.pop_front();
        auto [x, y] = nodes[cur];
        if (da.accepting[x] && db.accepting[y]) {
            EmptinessVerdict v;
            v.empty = false;
            for (int n = cur; parent[n].first >= 0; n = parent[n].first)
                v.witness.push_back(parent[n].second);
            std::reverse(v.witness.begin(), v.witness.end());
            return v;
        }
        for (Symbol s = 0; s < ns; ++s) push(da.dfa_next(x, s), db.dfa_next(y, s), cur, s);
    }
    return {};
}

bool accepts(const Fa& a, const Word& w) {
    for (Symbol x : w) require(x >= 0 && x < a.num_symbols, "accepts: symbol outside alphabet");
    if (a.kind == FaKind::Nfa) {
        std::vector<State> cur = {a.initial};
        for (Symbol x : w) {
            std::vector<State> next;
            for (State s : cur)
                if (const auto* ts = a.nfa_targets(s, x)) next.insert(next.end(), ts->begin(), ts->end());
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            cur = std::move(next);
            if (cur.empty()) return false;
        }
        for (State s : cur)
            if (a.accepting[s]) return true;
        return false;
    }
    State s = a.initial;
    for (Symbol x : w) {
        s = a.dfa_next(s, x);
        if (s < 0) return false; // partial DFA rejects on undefined transitions
    }
    return a.accepting[s];
}

// ---------------------------------------------------------------------------
// regex

std::unique_ptr<RegexExpr> RegexExpr::literal(Symbol s) {
    auto e = std::make_unique<RegexExpr>();
    e->node = Node::Literal;
    e->symbol = s;
    return e;
}
std::unique_ptr<RegexExpr> RegexExpr::epsilon() {
    auto e = std::make_unique<RegexExpr>();
    e->node = Node::Epsilon;
    return e;
}
std::unique_ptr<RegexExpr> RegexExpr::concat(std::unique_ptr<RegexExpr> a, std::unique_ptr<RegexExpr> b) {
    auto e = std::make_unique<RegexExpr>();
    e->node = Node::Concat;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
std::unique_ptr<RegexExpr> RegexExpr::alt(std::unique_ptr<RegexExpr> a, std::unique_ptr<RegexExpr> b) {
    auto e = std::make_unique<RegexExpr>();
    e->node = Node::Alt;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
std::unique_ptr<RegexExpr> RegexExpr::star(std::unique_ptr<RegexExpr> a) {
    auto e = std::make_unique<RegexExpr>();
    e->node = Node::Star;
    e->lhs = std::move(a);
    return e;
}

namespace {

struct RegexParser {
    const std::string& text;
    const std::vector<std::string>& alphabet;
    size_t pos = 0;
    RegexError err;
    bool failed = false;

    void fail(size_t at, std::string msg) {
        if (!failed) {
            failed = true;
            err = {at, std::move(msg)};
        }
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool ident_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-' ||
               c == '\'' || c == '^';
    }

    std::unique_ptr<RegexExpr> parse_alt() {
        auto e = parse_cat();
        if (!e) return nullptr;
        skip_ws();
        while (!failed && pos < text.size() && text[pos] == '|') {
            ++pos;
            auto r = parse_cat();
            if (!r) return nullptr;
            e = RegexExpr::alt(std::move(e), std::move(r));
            skip_ws();
        }
        return e;
    }

    std::unique_ptr<RegexExpr> parse_cat() {
        std::unique_ptr<RegexExpr> e;
        while (true) {
            skip_ws();
            if (pos >= text.size() || text[pos] == '|' || text[pos] == ')') break;
            auto f = parse_rep();
            if (!f) return nullptr;
            e = e ? RegexExpr::concat(std::move(e), std::move(f)) : std::move(f);
        }
        if (!e) {
            fail(pos, "expected a symbol, '(' or 'eps'");
            return nullptr;
        }
        return e;
    }

    std::unique_ptr<RegexExpr> parse_rep() {
        auto e = parse_atom();
        if (!e) return nullptr;
        skip_ws();
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            e = RegexExpr::star(std::move(e));
            skip_ws();
        }
        return e;
    }

    std::unique_ptr<RegexExpr> parse_atom() {
        skip_ws();
        if (pos >= text.size()) {
            fail(pos, "unexpected end of expression");
            return nullptr;
        }
        if (text[pos] == '(') {
            size_t open = pos++;
            auto e = parse_alt();
            if (!e) return nullptr;
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') {
                fail(open, "unbalanced '('");
                return nullptr;
            }
            ++pos;
            return e;
        }
        if (text[pos] == '*') {
            fail(pos, "'*' needs something to repeat");
            return nullptr;
        }
        size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        if (pos == start) {
            fail(pos, std::string("unexpected character '") + text[pos] + "'");
            return nullptr;
        }
        std::string name = text.substr(start, pos - start);
        if (name == "eps") return RegexExpr::epsilon();
        for (size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == name) return RegexExpr::literal(static_cast<Symbol>(i));
        fail(start, "unknown symbol '" + name + "'");
        return nullptr;
    }
};

// Thompson fragments over an epsilon-NFA that stays private to this function.
struct EpsNfa {
    int states = 0;
    std::vector<std::vector<std::pair<Symbol, State>>> edges; // symbol -1 = epsilon
    int add() {
        edges.emplace_back();
        return states++;
    }
    void link(State a, Symbol x, State b) { edges[a].push_back({x, b}); }
};

std::pair<State, State> thompson(const RegexExpr& r, EpsNfa& n) {
    switch (r.node) {
        case RegexExpr::Node::Literal: {
            State a = n.add(), b = n.add();
            n.link(a, r.symbol, b);
            return {a, b};
        }
        case RegexExpr::Node::Epsilon: {
            State a = n.add(), b = n.add();
            n.link(a, -1, b);
            return {a, b};
        }
        case RegexExpr::Node::Concat: {
            auto [a1, b1] = thompson(*r.lhs, n);
            auto [a2, b2] = thompson(*r.rhs, n);
            n.link(b1, -1, a2);
            return {a1, b2};
        }
        case RegexExpr::Node::Alt: {
            auto [a1, b1] = thompson(*r.lhs, n);
            auto [a2, b2] = thompson(*r.rhs, n);
            State a = n.add(), b = n.add();
            n.link(a, -1, a1);
            n.link(a, -1, a2);
            n.link(b1, -1, b);
            n.link(b2, -1, b);
            return {a, b};
        }
        case RegexExpr::Node::Star: {
            auto [a1, b1] = thompson(*r.lhs, n);
            State a = n.add(), b = n.add();
            n.link(a, -1, a1);
            n.link(a, -1, b);
            n.link(b1, -1, a1);
            n.link(b1, -1, b);
            return {a, b};
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace

std::unique_ptr<RegexExpr> parse_regex(const std::string& text,
                                       const std::vector<std::string>& alphabet,
                                       RegexError* error) {
    RegexParser p{text, alphabet, 0, {}, false};
    auto e = p.parse_alt();
    if (e) {
        p.skip_ws();
        if (p.pos < p.text.size()) {
            p.fail(p.pos, std::string("unexpected character '") + text[p.pos] + "'");
            e.reset();
        }
    }
    if (!e && error) *error = p.err;
    return e;
}

Fa regex_to_dfa(const RegexExpr& r, int num_symbols) {
    EpsNfa n;
    auto [start, accept] = thompson(r, n);

    // epsilon closures
    std::vector<std::vector<State>> closure(n.states);
    for (State s = 0; s < n.states; ++s) {
        std::vector<char> mark(n.states, 0);
        std::deque<State> work = {s};
        mark[s] = 1;
        while (!work.empty()) {
            State c = work.front();
            work.pop_front();
            for (auto& [x, t] : n.edges[c])
                if (x == -1 && !mark[t]) {
                    mark[t] = 1;
                    work.push_back(t);
                }
        }
        for (State t = 0; t < n.states; ++t)
            if (mark[t]) closure[s].push_back(t);
    }

    Fa nfa;
    nfa.kind = FaKind::Nfa;
    nfa.num_states = n.states;
    nfa.num_symbols = num_symbols;
    nfa.initial = start;
    nfa.accepting.assign(n.states, 0);
    nfa.moves.resize(n.states);
    for (State s = 0; s < n.states; ++s) {
        for (State c : closure[s])
            if (c == accept) nfa.accepting[s] = 1;
        std::map<Symbol, std::vector<State>> out;
        for (State c : closure[s])
            for (auto& [x, t] : n.edges[c])
                if (x >= 0)
                    for (State u : closure[t]) out[x].push_back(u);
        for (auto& [x, ts] : out) {
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            nfa.moves[s].push_back({x, std::move(ts)});
        }
    }
    return determinize(nfa);
}

} // namespace deceptiplan
