#include "deceptiplan/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <deque>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace deceptiplan {

const char* family_tag(Family f) {
    switch (f) {
        case Family::Init: return "init";
        case Family::Mapping: return "mapping";
        case Family::Forbidden: return "forbidden";
        case Family::Deceptive: return "deceptive";
        case Family::MatchUb: return "match_ub";
        case Family::MatchLb: return "match_lb";
        case Family::CountDef: return "count_def";
        case Family::ProduceUb: return "produce_ub";
        case Family::ProduceLb: return "produce_lb";
        case Family::Advance: return "advance";
        case Family::Sink: return "sink";
    }
    return "?";
}

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out.push_back(c);
        else if (c == '+')
            out.push_back('p');
        else if (c == '-')
            out.push_back('m');
        else
            out.push_back('_');
    }
    if (out.empty()) out = "x";
    return out;
}

std::vector<std::string> lp_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out(raw.size());
    std::set<std::string> used;
    for (size_t i = 0; i < raw.size(); ++i) {
        std::string base = sanitize(raw[i]);
        std::string name = base;
        int k = 1;
        while (!used.insert(name).second) name = base + "_" + std::to_string(k++);
        out[i] = name;
    }
    return out;
}

std::string digest_of(const DeceptionInstance& inst) {
    unsigned long long h = 1469598103934665603ull;
    auto mix = [&](long long v) { h = (h ^ static_cast<unsigned long long>(v)) * 1099511628211ull; };
    mix(inst.world.num_vertices);
    mix(inst.world.num_events);
    for (auto& e : inst.world.edges) {
        mix(e.src);
        mix(e.tgt);
        for (int y : e.obs) mix(y);
    }
    for (const Fa* fa : {&inst.itinerary, &inst.deviation}) {
        mix(fa->num_states);
        mix(fa->initial);
        for (char a : fa->accepting) mix(a);
        for (State t : fa->delta) mix(t);
    }
    for (auto& c : inst.cost.table) {
        mix(c.infinite ? -7 : c.value.num);
        mix(c.infinite ? -7 : c.value.den);
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

// Product pairs (q in O, p in M) reachable when every edge may produce any
// realizable observation or fall into the sink; used by the optional pruning.
std::vector<char> reachable_pairs(const Fa& outside, State sink, const Fa& m,
                                  const std::vector<int>& zset) {
    const int nqm = m.num_states;
    std::vector<char> alive(static_cast<size_t>(outside.num_states) * nqm, 0);
    std::deque<std::pair<State, State>> work;
    auto push = [&](State q, State p) {
        size_t i = static_cast<size_t>(q) * nqm + p;
        if (alive[i]) return;
        alive[i] = 1;
        work.push_back({q, p});
    };
    push(outside.initial, m.initial);
    while (!work.empty()) {
        auto [q, p] = work.front();
        work.pop_front();
        for (int e = 0; e < m.num_symbols; ++e) {
            State pn = m.dfa_next(p, e);
            if (pn < 0) continue;
            for (int z : zset) push(outside.dfa_next(q, z), pn);
            push(sink, pn);
        }
    }
    return alive;
}

} // namespace

VarId IlpModel::var_id(size_t dense) const {
    VarId v{};
    if (dense < off_u) {
        v.kind = VarKind::A;
        v.i = static_cast<int>((dense - off_a) / nQM);
        v.j = static_cast<int>((dense - off_a) % nQM);
    } else if (dense < off_n) {
        v.kind = VarKind::U;
        v.i = static_cast<int>((dense - off_u) / nY);
        v.j = static_cast<int>((dense - off_u) % nY);
    } else if (dense < off_b) {
        v.kind = VarKind::N;
        v.i = static_cast<int>((dense - off_n) / nZ);
        v.j = static_cast<int>((dense - off_n) % nZ);
    } else if (dense < off_c) {
        size_t r = dense - off_b;
        v.kind = VarKind::B;
        v.i = static_cast<int>(r / (static_cast<size_t>(nE) * nY));
        v.j = static_cast<int>(r / nY % nE);
        v.k = static_cast<int>(r % nY);
    } else if (dense < off_l) {
        v.kind = VarKind::CMult;
        v.i = static_cast<int>((dense - off_c) / nY);
        v.j = static_cast<int>((dense - off_c) % nY);
    } else {
        v.kind = VarKind::L;
        v.i = static_cast<int>((dense - off_l) / nE);
        v.j = static_cast<int>((dense - off_l) % nE);
    }
    return v;
}

std::pair<int, int> choose_big_m(const DeceptionInstance& instance) {
    int m = std::max(1, instance.world.max_simultaneous());
    return {m, 2 * m};
}

IlpModel build_model(DeceptionInstance& instance, BuildOptions opts) {
    instance.ensure_built();
    IlpModel md;
    md.outside = instance.outside;
    md.deviation_product = instance.deviation_product;
    md.sigma = instance.sigma;
    md.zset = instance.zset;
    md.cost = instance.cost;
    md.q_sink = instance.outside_sink;
    md.instance_digest = digest_of(instance);

    const WorldGraph& g = instance.world;
    md.nQO = md.outside.num_states;
    md.nQM = md.deviation_product.num_states;
    md.nY = g.num_events;
    md.nZ = static_cast<int>(md.zset.size());
    md.nE = static_cast<int>(g.edges.size());
    md.edge_obs.resize(md.nE);
    for (int e = 0; e < md.nE; ++e) md.edge_obs[e] = g.edges[e].obs;

    auto [bigm, bigm2] = choose_big_m(instance);
    if (opts.big_m_scale > 1) {
        bigm *= opts.big_m_scale;
        bigm2 *= opts.big_m_scale;
    }
    md.big_m = bigm;
    md.big_m_prime = bigm2;
    md.big_m_derivation =
        "M = " + std::to_string(bigm) + " (>= m bounds |sum_{y' in O(e)} u_{y',y} - n_{y,x}|), "
        "M' = " + std::to_string(bigm2) + " (>= 2m bounds sum_{y in x} b + sum_{y not in x} c)";

    md.pruned = opts.prune_unreachable_pairs;
    if (md.pruned)
        md.pair_alive = reachable_pairs(md.outside, md.q_sink, md.deviation_product, md.zset);
    auto alive = [&](int q, int p) {
        return !md.pruned || md.pair_alive[static_cast<size_t>(q) * md.nQM + p];
    };

    // dense layout
    md.off_a = 0;
    md.off_u = md.off_a + static_cast<size_t>(md.nQO) * md.nQM;
    md.off_n = md.off_u + static_cast<size_t>(md.nY) * md.nY;
    md.off_b = md.off_n + static_cast<size_t>(md.nY) * md.nZ;
    md.off_c = md.off_b + static_cast<size_t>(md.nZ) * md.nE * md.nY;
    md.off_l = md.off_c + static_cast<size_t>(md.nE) * md.nY;
    md.num_vars = md.off_l + static_cast<size_t>(md.nZ) * md.nE;

    std::vector<std::string> ev = lp_names(g.event_names);
    std::vector<std::string> ed = lp_names(g.edge_names);

    md.vars.resize(md.num_vars);
    for (int q = 0; q < md.nQO; ++q)
        for (int p = 0; p < md.nQM; ++p) {
            auto& v = md.vars[md.a_index(q, p)];
            v.name = "a_" + std::to_string(q) + "_" + std::to_string(p);
            v.lo = Rational(0);
            v.hi = Rational(1);
            v.binary = true;
        }
    for (int y = 0; y < md.nY; ++y)
        for (int t = 0; t < md.nY; ++t) {
            auto& v = md.vars[md.u_index(y, t)];
            v.name = "u_" + ev[y] + "_" + ev[t];
            v.lo = Rational(0);
            v.hi = md.cost.at(y, t).infinite ? Rational(0) : Rational(1);
            v.binary = true;
        }
    for (int y = 0; y < md.nY; ++y)
        for (int zi = 0; zi < md.nZ; ++zi) {
            auto& v = md.vars[md.n_index(y, zi)];
            v.name = "n_" + ev[y] + "_z" + std::to_string(zi);
            Rational fixed(multiplicity(y, md.sigma.symbols[md.zset[zi]]));
            v.lo = v.hi = fixed;
        }
    for (int zi = 0; zi < md.nZ; ++zi)
        for (int e = 0; e < md.nE; ++e)
            for (int y = 0; y < md.nY; ++y) {
                auto& v = md.vars[md.b_index(zi, e, y)];
                v.name = "b_z" + std::to_string(zi) + "_" + ed[e] + "_" + ev[y];
                v.lo = Rational(0);
                v.hi = Rational(1);
                v.binary = true;
            }
    for (int e = 0; e < md.nE; ++e)
        for (int y = 0; y < md.nY; ++y) {
            auto& v = md.vars[md.c_index(e, y)];
            v.name = "c_" + ed[e] + "_" + ev[y];
            v.lo = Rational(0);
            v.hi = Rational(static_cast<long long>(md.edge_obs[e].size()));
        }
    for (int zi = 0; zi < md.nZ; ++zi)
        for (int e = 0; e < md.nE; ++e) {
            auto& v = md.vars[md.l_index(zi, e)];
            v.name = "l_z" + std::to_string(zi) + "_" + ed[e];
            v.lo = Rational(0);
            v.hi = Rational(1);
            v.binary = true;
        }

    // objective over finite, nonzero cost pairs
    for (int y = 0; y < md.nY; ++y)
        for (int t = 0; t < md.nY; ++t) {
            const Cost& c = md.cost.at(y, t);
            if (!c.infinite && c.value.num != 0)
                md.objective.push_back({c.value, static_cast<int>(md.u_index(y, t))});
        }

    auto row = [&](Family f, std::string name, std::vector<std::pair<Rational, int>> terms, Rel rel,
                   Rational rhs) {
        LinearConstraint lc;
        lc.family = f;
        lc.name = std::string(family_tag(f)) + "_" + std::move(name);
        lc.terms = std::move(terms);
        lc.rel = rel;
        lc.rhs = rhs;
        md.constraints.push_back(std::move(lc));
    };

    const Fa& O = md.outside;
    const Fa& M = md.deviation_product;

    // initial condition
    row(Family::Init, "0",
        {{Rational(1), static_cast<int>(md.a_index(O.initial, M.initial))}}, Rel::Eq, Rational(1));

    // each event maps to exactly one target
    for (int y = 0; y < md.nY; ++y) {
        std::vector<std::pair<Rational, int>> terms;
        for (int t = 0; t < md.nY; ++t) terms.push_back({Rational(1), static_cast<int>(md.u_index(y, t))});
        row(Family::Mapping, ev[y], std::move(terms), Rel::Eq, Rational(1));
    }

    // infinite-cost mappings are off
    for (int y = 0; y < md.nY; ++y)
        for (int t = 0; t < md.nY; ++t)
            if (md.cost.at(y, t).infinite)
                row(Family::Forbidden, ev[y] + "_" + ev[t],
                    {{Rational(1), static_cast<int>(md.u_index(y, t))}}, Rel::Eq, Rational(0));

    // accepting pairs unreachable
    for (int q = 0; q < md.nQO; ++q) {
        if (!O.accepting[q]) continue;
        for (int p = 0; p < md.nQM; ++p) {
            if (!M.accepting[p] || !alive(q, p)) continue;
            row(Family::Deceptive, std::to_string(q) + "_" + std::to_string(p),
                {{Rational(1), static_cast<int>(md.a_index(q, p))}}, Rel::Eq, Rational(0));
        }
    }

    // b detectors: |sum u - n| <= M b
    for (int zi = 0; zi < md.nZ; ++zi)
        for (int e = 0; e < md.nE; ++e)
            for (int y = 0; y < md.nY; ++y) {
                std::vector<std::pair<Rational, int>> base;
                for (int src : md.edge_obs[e]) base.push_back({Rational(1), static_cast<int>(md.u_index(src, y))});
                base.push_back({Rational(-1), static_cast<int>(md.n_index(y, zi))});
                std::string nm = "z" + std::to_string(zi) + "_" + ed[e] + "_" + ev[y];
                auto ub = base;
                ub.push_back({Rational(-md.big_m), static_cast<int>(md.b_index(zi, e, y))});
                row(Family::MatchUb, nm, std::move(ub), Rel::Le, Rational(0));
                auto lb = std::move(base);
                lb.push_back({Rational(md.big_m), static_cast<int>(md.b_index(zi, e, y))});
                row(Family::MatchLb, nm, std::move(lb), Rel::Ge, Rational(0));
            }

    // c_{e,y} definition
    for (int e = 0; e < md.nE; ++e)
        for (int y = 0; y < md.nY; ++y) {
            std::vector<std::pair<Rational, int>> terms{{Rational(1), static_cast<int>(md.c_index(e, y))}};
            for (int src : md.edge_obs[e]) terms.push_back({Rational(-1), static_cast<int>(md.u_index(src, y))});
            row(Family::CountDef, ed[e] + "_" + ev[y], std::move(terms), Rel::Eq, Rational(0));
        }

    // l gating through M'
    for (int zi = 0; zi < md.nZ; ++zi) {
        const ObsMultiset& zms = md.sigma.symbols[md.zset[zi]];
        std::vector<char> in_support(md.nY, 0);
        for (auto& [y, k] : zms.items) in_support[y] = 1;
        for (int e = 0; e < md.nE; ++e) {
            std::vector<std::pair<Rational, int>> base;
            for (auto& [y, k] : zms.items) base.push_back({Rational(1), static_cast<int>(md.b_index(zi, e, y))});
            for (int y = 0; y < md.nY; ++y)
                if (!in_support[y]) base.push_back({Rational(1), static_cast<int>(md.c_index(e, y))});
            std::string nm = "z" + std::to_string(zi) + "_" + ed[e];
            auto ub = base;
            ub.push_back({Rational(md.big_m_prime), static_cast<int>(md.l_index(zi, e))});
            row(Family::ProduceUb, nm, std::move(ub), Rel::Le, Rational(md.big_m_prime));
            auto lb = std::move(base);
            lb.push_back({Rational(-md.big_m_prime), static_cast<int>(md.l_index(zi, e))});
            row(Family::ProduceLb, nm, std::move(lb), Rel::Ge, Rational(-md.big_m_prime));
        }
    }

    // advance: a_{q,p} <= 1 - l_{x,e} + a_{delta_O(q,x), delta_M(p,e)}
    for (int q = 0; q < md.nQO; ++q)
        for (int p = 0; p < md.nQM; ++p) {
            if (!alive(q, p)) continue;
            for (int e = 0; e < md.nE; ++e) {
                State pn = M.dfa_next(p, e);
                if (pn < 0) continue;
                for (int zi = 0; zi < md.nZ; ++zi) {
                    State qn = O.dfa_next(q, md.zset[zi]);
                    row(Family::Advance,
                        std::to_string(q) + "_" + std::to_string(p) + "_z" + std::to_string(zi) + "_" + ed[e],
                        {{Rational(1), static_cast<int>(md.a_index(q, p))},
                         {Rational(1), static_cast<int>(md.l_index(zi, e))},
                         {Rational(-1), static_cast<int>(md.a_index(qn, pn))}},
                        Rel::Le, Rational(1));
                }
                // sink fallback: a_{q,p} <= a_{sink, pn} + sum_z l
                std::vector<std::pair<Rational, int>> terms{
                    {Rational(1), static_cast<int>(md.a_index(q, p))},
                    {Rational(-1), static_cast<int>(md.a_index(md.q_sink, pn))}};
                for (int zi = 0; zi < md.nZ; ++zi)
                    terms.push_back({Rational(-1), static_cast<int>(md.l_index(zi, e))});
                row(Family::Sink, std::to_string(q) + "_" + std::to_string(p) + "_" + ed[e],
                    std::move(terms), Rel::Le, Rational(0));
            }
        }

    return md;
}

ModelStats model_stats(const IlpModel& md) {
    ModelStats s;
    auto alive = [&](int q, int p) {
        return !md.pruned || md.pair_alive[static_cast<size_t>(q) * md.nQM + p];
    };
    size_t a_count = 0;
    for (int q = 0; q < md.nQO; ++q)
        for (int p = 0; p < md.nQM; ++p)
            if (alive(q, p)) ++a_count;
    s.variable_counts["a"] = a_count;
    s.variable_counts["u"] = static_cast<size_t>(md.nY) * md.nY;
    s.variable_counts["n"] = static_cast<size_t>(md.nY) * md.nZ;
    s.variable_counts["b"] = static_cast<size_t>(md.nZ) * md.nE * md.nY;
    s.variable_counts["c"] = static_cast<size_t>(md.nE) * md.nY;
    s.variable_counts["l"] = static_cast<size_t>(md.nZ) * md.nE;
    for (auto& c : md.constraints) s.constraint_counts[family_tag(c.family)]++;
    for (const char* tag : {"init", "mapping", "forbidden", "deceptive", "match_ub", "match_lb",
                            "count_def", "produce_ub", "produce_lb", "advance", "sink"})
        s.constraint_counts.emplace(tag, 0);
    return s;
}

// ---------------------------------------------------------------------------
// LP text

std::string export_lp(const IlpModel& md) {
    std::ostringstream out;
    out << "\\ deceptiplan model " << md.instance_digest << "\n";
    out << "\\ " << md.big_m_derivation << "\n";
    out << "Minimize\n obj:";
    bool first = true;
    for (auto& [coef, var] : md.objective) {
        out << (first ? " " : " + ") << coef.decimal_str() << " " << md.vars[var].name;
        first = false;
    }
    if (first) out << " 0 " << md.vars[md.off_u].name; // degenerate all-zero objective
    out << "\nSubject To\n";
    auto alive_var = [&](int v) {
        return !md.pruned || static_cast<size_t>(v) >= md.off_u ||
               md.pair_alive[static_cast<size_t>(v) - md.off_a];
    };
    for (auto& c : md.constraints) {
        out << " " << c.name << ":";
        for (auto& [coef, var] : c.terms) {
            if (coef.num >= 0)
                out << " + " << coef.decimal_str();
            else
                out << " - " << (Rational(0) - coef).decimal_str();
            out << " " << md.vars[var].name;
        }
        out << (c.rel == Rel::Le ? " <= " : c.rel == Rel::Eq ? " = " : " >= ");
        out << c.rhs.decimal_str() << "\n";
    }
    out << "Bounds\n";
    for (size_t v = 0; v < md.num_vars; ++v) {
        if (!alive_var(static_cast<int>(v))) continue;
        const auto& info = md.vars[v];
        if (info.lo == info.hi)
            out << " " << info.name << " = " << info.lo.decimal_str() << "\n";
        else if (!(info.lo == Rational(0)) || info.binary == false || !(info.hi == Rational(1)))
            out << " " << info.lo.decimal_str() << " <= " << info.name << " <= "
                << info.hi.decimal_str() << "\n";
    }
    out << "Binary\n";
    for (size_t v = 0; v < md.num_vars; ++v)
        if (md.vars[v].binary && alive_var(static_cast<int>(v))) out << " " << md.vars[v].name << "\n";
    out << "Generals\n";
    for (size_t v = 0; v < md.num_vars; ++v)
        if (!md.vars[v].binary && alive_var(static_cast<int>(v))) out << " " << md.vars[v].name << "\n";
    out << "End\n";
    return out.str();
}

namespace {

struct LpLexer {
    const std::string& text;
    size_t pos = 0;

    void skip() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '\\') { // comment to end of line
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip();
        return pos >= text.size();
    }

    std::string peek_word() {
        size_t save = pos;
        std::string w = next_word();
        pos = save;
        return w;
    }

    std::string next_word() {
        skip();
        size_t start = pos;
        if (pos < text.size() &&
            (text[pos] == '+' || text[pos] == '-' || text[pos] == '=' || text[pos] == '<' ||
             text[pos] == '>' || text[pos] == ':')) {
            ++pos;
            if (pos < text.size() && text[pos] == '=' && (text[start] == '<' || text[start] == '>'))
                ++pos;
            return text.substr(start, pos - start);
        }
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != ':' && text[pos] != '+' && text[pos] != '-' && text[pos] != '<' &&
               text[pos] != '>' && text[pos] != '=')
            ++pos;
        return text.substr(start, pos - start);
    }
};

bool is_number(const std::string& w) {
    if (w.empty()) return false;
    for (char c : w)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+') return false;
    return true;
}

} // namespace

ParsedLp parse_lp(const std::string& text) {
    ParsedLp lp;
    LpLexer lex{text};

    auto word_lower = [](std::string w) {
        for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return w;
    };

    std::string w = lex.next_word();
    if (word_lower(w) != "minimize") throw std::invalid_argument("lp: expected Minimize");

    // objective: name ':' terms, until "subject"
    std::string objname = lex.next_word();
    if (lex.next_word() != ":") throw std::invalid_argument("lp: expected ':' after objective name");
    int sign = 1;
    std::optional<Rational> coef;
    auto flush_term = [&](std::vector<std::pair<Rational, std::string>>& into, const std::string& var) {
        Rational c = coef.value_or(Rational(1));
        if (sign < 0) c = Rational(0) - c;
        into.push_back({c, var});
        sign = 1;
        coef.reset();
    };
    while (!lex.eof()) {
        std::string t = lex.peek_word();
        if (word_lower(t) == "subject") break;
        t = lex.next_word();
        if (t == "+") continue;
        if (t == "-") { sign = -sign; continue; }
        if (is_number(t)) { coef = Rational::parse(t); continue; }
        flush_term(lp.objective, t);
    }
    if (word_lower(lex.next_word()) != "subject" || word_lower(lex.next_word()) != "to")
        throw std::invalid_argument("lp: expected Subject To");

    auto is_section = [&](const std::string& t) {
        std::string l = word_lower(t);
        return l == "bounds" || l == "binary" || l == "binaries" || l == "general" ||
               l == "generals" || l == "end";
    };

    // rows
    while (!lex.eof()) {
        std::string t = lex.peek_word();
        if (is_section(t)) break;
        ParsedLp::Row rowv;
        rowv.name = lex.next_word();
        if (lex.next_word() != ":") throw std::invalid_argument("lp: expected ':' after row name");
        sign = 1;
        coef.reset();
        while (true) {
            std::string u = lex.next_word();
            if (u == "+") continue;
            if (u == "-") { sign = -sign; continue; }
            if (u == "<=" || u == "<") { rowv.rel = Rel::Le; break; }
            if (u == ">=" || u == ">") { rowv.rel = Rel::Ge; break; }
            if (u == "=") { rowv.rel = Rel::Eq; break; }
            if (is_number(u)) { coef = Rational::parse(u); continue; }
            flush_term(rowv.terms, u);
        }
        std::string rhs = lex.next_word();
        bool neg = false;
        if (rhs == "-") { neg = true; rhs = lex.next_word(); }
        rowv.rhs = Rational::parse(rhs);
        if (neg) rowv.rhs = Rational(0) - rowv.rhs;
        lp.rows.push_back(std::move(rowv));
    }

    // sections
    while (!lex.eof()) {
        std::string section = word_lower(lex.next_word());
        if (section == "end") break;
        if (section == "bounds") {
            while (!lex.eof() && !is_section(lex.peek_word())) {
                // forms: "lo <= name <= hi" | "name = v" | "name <= hi"
                std::string a = lex.next_word();
                bool aneg = false;
                if (a == "-") { aneg = true; a = lex.next_word(); }
                if (is_number(a)) {
                    Rational lo = Rational::parse(a);
                    if (aneg) lo = Rational(0) - lo;
                    if (lex.next_word() != "<=") throw std::invalid_argument("lp: bad bound");
                    std::string name = lex.next_word();
                    if (lex.next_word() != "<=") throw std::invalid_argument("lp: bad bound");
                    Rational hi = Rational::parse(lex.next_word());
                    lp.bounds[name] = {lo, hi};
                } else {
                    std::string op = lex.next_word();
                    std::string v = lex.next_word();
                    bool vneg = false;
                    if (v == "-") { vneg = true; v = lex.next_word(); }
                    Rational val = Rational::parse(v);
                    if (vneg) val = Rational(0) - val;
                    if (op == "=")
                        lp.bounds[a] = {val, val};
                    else if (op == "<=")
                        lp.bounds[a] = {Rational(0), val};
                    else
                        lp.bounds[a] = {val, Rational(1)};
                }
            }
        } else if (section == "binary" || section == "binaries") {
            while (!lex.eof() && !is_section(lex.peek_word())) lp.binaries.push_back(lex.next_word());
        } else if (section == "general" || section == "generals") {
            while (!lex.eof() && !is_section(lex.peek_word())) lp.generals.push_back(lex.next_word());
        } else {
            throw std::invalid_argument("lp: unknown section '" + section + "'");
        }
    }
    return lp;
}

// ---------------------------------------------------------------------------
// assignments

Assignment assignment_from_alteration(const IlpModel& md, const SensorAlteration& a) {
    if (static_cast<int>(a.to.size()) != md.nY)
        throw std::invalid_argument("assignment_from_alteration: domain mismatch");
    Assignment x(md.num_vars, Rational(0));

    for (int y = 0; y < md.nY; ++y) x[md.u_index(y, a.to[y])] = Rational(1);
    for (int y = 0; y < md.nY; ++y)
        for (int zi = 0; zi < md.nZ; ++zi)
            x[md.n_index(y, zi)] = Rational(multiplicity(y, md.sigma.symbols[md.zset[zi]]));

    // altered multiset per edge, via u: s_y = #events of O(e) mapped to y
    std::vector<int> altered_sym(md.nE); // sigma id of the altered observation
    for (int e = 0; e < md.nE; ++e) {
        std::vector<int> s(md.nY, 0);
        for (int src : md.edge_obs[e]) s[a.to[src]]++;
        ObsMultiset ms;
        for (int y = 0; y < md.nY; ++y) {
            if (s[y] > 0) ms.items.push_back({y, s[y]});
            x[md.c_index(e, y)] = Rational(s[y]);
        }
        altered_sym[e] = md.sigma.id_of(ms);
        for (int zi = 0; zi < md.nZ; ++zi) {
            const ObsMultiset& z = md.sigma.symbols[md.zset[zi]];
            for (int y = 0; y < md.nY; ++y)
                x[md.b_index(zi, e, y)] = Rational(s[y] == multiplicity(y, z) ? 0 : 1);
            x[md.l_index(zi, e)] = Rational(md.zset[zi] == altered_sym[e] ? 1 : 0);
        }
    }

    // least fixed point of the reachability (advance + sink) families
    const Fa& O = md.outside;
    const Fa& M = md.deviation_product;
    std::deque<std::pair<State, State>> work;
    auto push = [&](State q, State p) {
        size_t i = md.a_index(q, p);
        if (x[i] == Rational(1)) return;
        x[i] = Rational(1);
        work.push_back({q, p});
    };
    push(O.initial, M.initial);
    while (!work.empty()) {
        auto [q, p] = work.front();
        work.pop_front();
        for (int e = 0; e < md.nE; ++e) {
            State pn = M.dfa_next(p, e);
            if (pn < 0) continue;
            push(O.dfa_next(q, altered_sym[e]), pn);
        }
    }
    return x;
}

CheckReport check_assignment(const IlpModel& md, const Assignment& x) {
    if (x.size() != md.num_vars) throw std::invalid_argument("check_assignment: missing variables");
    CheckReport rep;

    auto ok = [&](const Rational& lhs, Rel rel, const Rational& rhs) {
        switch (rel) {
            case Rel::Le: return lhs <= rhs;
            case Rel::Eq: return lhs == rhs;
            case Rel::Ge: return lhs >= rhs;
        }
        return false;
    };

    for (auto& c : md.constraints) {
        Rational lhs(0);
        for (auto& [coef, var] : c.terms) lhs += coef * x[var];
        if (!ok(lhs, c.rel, c.rhs)) {
            rep.linear_satisfied = false;
            if (rep.violations.size() < 50) rep.violations.push_back({c.name, lhs, c.rel, c.rhs});
        }
    }
    // variable domains count toward the linearized program
    for (size_t v = 0; v < md.num_vars; ++v) {
        if (md.pruned && v < md.off_u && !md.pair_alive[v]) continue;
        const auto& info = md.vars[v];
        bool in_range = info.lo <= x[v] && x[v] <= info.hi;
        bool integral = x[v].den == 1;
        if (!in_range || (info.integral && !integral)) {
            rep.linear_satisfied = false;
            if (rep.violations.size() < 50)
                rep.violations.push_back({"domain_" + info.name, x[v], Rel::Le, info.hi});
        }
    }

    // Pre-linearized logical program: init, mapping, forbidden, deceptive plus
    // the universally quantified implication over all of Sigma. The u-sums pin
    // the produced observation exactly, so at most one x in Sigma satisfies the
    // premise for a given edge; evaluate that way instead of looping over Sigma.
    auto logical_fail = [&](std::string why) {
        rep.logical_satisfied = false;
        if (rep.logical_violations.size() < 20) rep.logical_violations.push_back(std::move(why));
    };

    const Fa& O = md.outside;
    const Fa& M = md.deviation_product;
    if (!(x[md.a_index(O.initial, M.initial)] == Rational(1))) logical_fail("initial pair not set");
    for (int y = 0; y < md.nY; ++y) {
        Rational sum(0);
        for (int t = 0; t < md.nY; ++t) sum += x[md.u_index(y, t)];
        if (!(sum == Rational(1))) logical_fail("mapping row of event " + std::to_string(y));
        for (int t = 0; t < md.nY; ++t)
            if (md.cost.at(y, t).infinite && !(x[md.u_index(y, t)] == Rational(0)))
                logical_fail("forbidden mapping used");
    }
    for (int q = 0; q < md.nQO; ++q)
        for (int p = 0; p < md.nQM; ++p) {
            if (md.pruned && !md.pair_alive[static_cast<size_t>(q) * md.nQM + p]) continue;
            if (O.accepting[q] && M.accepting[p] && !(x[md.a_index(q, p)] == Rational(0)))
                logical_fail("accepting pair (" + std::to_string(q) + "," + std::to_string(p) +
                             ") reached");
        }

    // the unique x (if any) each edge produces under the u-values
    std::vector<int> produced(md.nE, -1);
    for (int e = 0; e < md.nE; ++e) {
        ObsMultiset ms;
        bool well_formed = true;
        for (int y = 0; y < md.nY && well_formed; ++y) {
            Rational s(0);
            for (int src : md.edge_obs[e]) s += x[md.u_index(src, y)];
            if (s.den != 1 || s.num < 0) well_formed = false;
            else if (s.num > 0) ms.items.push_back({y, static_cast<int>(s.num)});
        }
        if (well_formed && !ms.items.empty()) produced[e] = md.sigma.id_of(ms);
    }
    for (int q = 0; q < md.nQO; ++q)
        for (int p = 0; p < md.nQM; ++p) {
            if (md.pruned && !md.pair_alive[static_cast<size_t>(q) * md.nQM + p]) continue;
            if (!(x[md.a_index(q, p)] == Rational(1))) continue;
            for (int e = 0; e < md.nE; ++e) {
                State pn = M.dfa_next(p, e);
                if (pn < 0 || produced[e] < 0) continue;
                State qn = O.dfa_next(q, produced[e]);
                if (!(x[md.a_index(qn, pn)] == Rational(1)))
                    logical_fail("implication (" + std::to_string(q) + "," + std::to_string(p) +
                                 ") --" + std::to_string(e) + "--> not propagated");
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// branch-and-bound solver

namespace {

struct Propagator {
    const Fa* outside = nullptr;
    const Fa* m = nullptr;
    State sink = -1;
    int ne = 0;
    std::vector<char> coreach; // M-states that can still reach acceptance

    // True when the partial assignment already dooms the branch: an accepting
    // pair is reachable over determined edges, or the absorbing sink has been
    // entered at an M-state that can still complete a deviation walk (the
    // sink is accepting and never left, so every completion stays refuted).
    bool forces_accepting(const std::vector<int>& labels) const {
        const int nqm = m->num_states;
        std::vector<char> seen(static_cast<size_t>(outside->num_states) * nqm, 0);
        std::deque<std::pair<State, State>> work;
        auto push = [&](State q, State p) {
            size_t i = static_cast<size_t>(q) * nqm + p;
            if (seen[i]) return;
            seen[i] = 1;
            work.push_back({q, p});
        };
        push(outside->initial, m->initial);
        while (!work.empty()) {
            auto [q, p] = work.front();
            work.pop_front();
            if (outside->accepting[q] && m->accepting[p]) return true;
            if (q == sink && coreach[p]) return true;
            for (int e = 0; e < ne; ++e) {
                State pn = m->dfa_next(p, e);
                if (pn < 0 || !coreach[pn] || labels[e] < 0) continue;
                push(outside->dfa_next(q, labels[e]), pn);
            }
        }
        return false;
    }
};

std::vector<char> coreachable_states(const Fa& m) {
    std::vector<char> co(m.num_states, 0);
    std::deque<State> work;
    for (State p = 0; p < m.num_states; ++p)
        if (m.accepting[p]) {
            co[p] = 1;
            work.push_back(p);
        }
    while (!work.empty()) {
        State t = work.front();
        work.pop_front();
        for (State p = 0; p < m.num_states; ++p) {
            if (co[p]) continue;
            for (int e = 0; e < m.num_symbols; ++e)
                if (m.dfa_next(p, e) == t) {
                    co[p] = 1;
                    work.push_back(p);
                    break;
                }
        }
    }
    return co;
}

} // namespace

PlanResult solve(DeceptionInstance& instance, SolveOptions opts) {
    auto started = std::chrono::steady_clock::now();
    instance.ensure_built();
    const WorldGraph& g = instance.world;
    const int ny = g.num_events;
    const int ne = static_cast<int>(g.edges.size());
    const Fa& M = instance.deviation_product;

    PlanResult result;

    // cheapest finite target per event, ties to the smallest id
    std::vector<int> cheapest(ny, -1);
    std::vector<Cost> cheapest_cost(ny, Cost::inf());
    for (int y = 0; y < ny; ++y)
        for (int t = 0; t < ny; ++t) {
            const Cost& c = instance.cost.at(y, t);
            if (!c.infinite && c < cheapest_cost[y]) {
                cheapest_cost[y] = c;
                cheapest[y] = t;
            }
        }
    for (int y = 0; y < ny; ++y)
        if (cheapest[y] < 0) {
            result.status = PlanStatus::Infeasible;
            result.certificate =
                "event " + g.event_names[y] + " has no finite-cost target; every alteration costs infinity";
            result.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            return result;
        }

    // Only events observed on live deviation-product edges (those on a path
    // from the initial state to acceptance) influence feasibility; the rest
    // take their cheapest target outright. Live events are branched in
    // breadth-first deviation order so edge labels become determined early
    // and the propagation prune can fire near the root.
    std::vector<char> coreach = coreachable_states(M);
    std::vector<char> relevant_mask(ny, 0);
    std::vector<int> relevant;
    {
        std::vector<char> visited(M.num_states, 0);
        std::deque<State> work;
        visited[M.initial] = 1;
        work.push_back(M.initial);
        while (!work.empty()) {
            State p = work.front();
            work.pop_front();
            if (!coreach[p]) continue;
            for (int e = 0; e < ne; ++e) {
                State pn = M.dfa_next(p, e);
                if (pn < 0 || !coreach[pn]) continue;
                for (int y : g.edges[e].obs)
                    if (!relevant_mask[y]) {
                        relevant_mask[y] = 1;
                        relevant.push_back(y);
                    }
                if (!visited[pn]) {
                    visited[pn] = 1;
                    work.push_back(pn);
                }
            }
        }
    }
    const int nr = static_cast<int>(relevant.size());

    Rational fixed_base(0);
    for (int y = 0; y < ny; ++y)
        if (!relevant_mask[y]) fixed_base += cheapest_cost[y].value;
    Rational relevant_min(0);
    for (int y : relevant) relevant_min += cheapest_cost[y].value;

    Propagator prop{&instance.outside, &M, instance.outside_sink, ne, coreach};

    // per-edge altered label given a partial assignment (-1 while undetermined)
    auto edge_labels = [&](const std::vector<int>& assign) {
        std::vector<int> labels(ne, -1);
        for (int e = 0; e < ne; ++e) {
            ObsMultiset ms;
            bool known = true;
            std::vector<std::pair<int, int>> acc;
            for (int y : g.edges[e].obs) {
                int t = assign[y];
                if (t < 0) { known = false; break; }
                acc.push_back({t, 1});
            }
            if (!known) continue;
            std::sort(acc.begin(), acc.end());
            for (auto& [t, k] : acc) {
                if (!ms.items.empty() && ms.items.back().first == t)
                    ms.items.back().second += k;
                else
                    ms.items.push_back({t, k});
            }
            labels[e] = instance.sigma.id_of(ms);
        }
        return labels;
    };

    struct Node {
        Rational bound;
        std::vector<int> prefix; // targets for relevant[0..k)
    };
    auto cmp = [](const Node& a, const Node& b) {
        if (a.bound != b.bound) return b.bound < a.bound;
        return b.prefix < a.prefix;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> pq(cmp);
    pq.push({fixed_base + relevant_min, {}});

    std::vector<int> assign(ny, -1);
    while (!pq.empty()) {
        Node node = pq.top();
        pq.pop();
        result.nodes_expanded++;
        if (opts.node_limit && result.nodes_expanded > opts.node_limit)
            throw std::runtime_error("solve: node limit exceeded");

        std::fill(assign.begin(), assign.end(), -1);
        for (size_t i = 0; i < node.prefix.size(); ++i) assign[relevant[i]] = node.prefix[i];

        // partial (or complete) propagation over determined edges
        if (prop.forces_accepting(edge_labels(assign))) continue;

        if (static_cast<int>(node.prefix.size()) == nr) {
            SensorAlteration a;
            a.to.resize(ny);
            for (int y = 0; y < ny; ++y) a.to[y] = relevant_mask[y] ? assign[y] : cheapest[y];
            result.status = PlanStatus::Optimal;
            result.alteration = std::move(a);
            result.cost = Cost(node.bound);
            break;
        }

        int y = relevant[node.prefix.size()];
        // children ordered by (cost, target id)
        std::vector<std::pair<Rational, int>> targets;
        for (int t = 0; t < ny; ++t) {
            const Cost& c = instance.cost.at(y, t);
            if (!c.infinite) targets.push_back({c.value, t});
        }
        std::sort(targets.begin(), targets.end(),
                  [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return a.second < b.second;
                  });
        for (auto& [cval, t] : targets) {
            Node child;
            child.bound = node.bound - cheapest_cost[y].value + cval;
            child.prefix = node.prefix;
            child.prefix.push_back(t);
            pq.push(std::move(child));
        }
    }

    if (result.status == PlanStatus::Infeasible) {
        result.certificate = "branch-and-bound exhausted every alteration branch; all were refuted";
    } else if (opts.cross_validate) {
        BuildOptions bo;
        bo.prune_unreachable_pairs = opts.prune_unreachable_pairs;
        IlpModel md = build_model(instance, bo);
        Assignment witness = assignment_from_alteration(md, result.alteration);
        CheckReport rep = check_assignment(md, witness);
        if (!rep.linear_satisfied || rep.divergence())
            throw std::logic_error("solve: optimal alteration fails the model cross-check");
        Rational obj(0);
        for (auto& [coef, var] : md.objective) obj += coef * witness[var];
        // objective re-evaluation must agree with the search's cost
        if (!(Cost(obj) == result.cost))
            throw std::logic_error("solve: objective mismatch against the model");
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace deceptiplan
