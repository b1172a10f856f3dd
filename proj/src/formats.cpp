#include "deceptiplan/formats.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

namespace deceptiplan {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

int lookup(const std::map<std::string, int>& table, const std::string& name,
           const std::string& where) {
    auto it = table.find(name);
    if (it == table.end()) bail(where, "unknown identifier '" + name + "'");
    return it->second;
}

Cost parse_cost(const json& v, const std::string& where) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return Cost::inf();
        return Cost(Rational::parse(s));
    }
    if (v.is_number_integer()) return Cost(Rational(v.get<long long>()));
    if (v.is_number_float()) {
        // route floats through their printed form to keep them exact-ish
        std::ostringstream os;
        os << v.get<double>();
        return Cost(Rational::parse(os.str()));
    }
    bail(where, "cost must be a number or \"inf\"");
}

Fa automaton_from_json(const json& spec, const std::map<std::string, int>& edge_ids, int ne,
                       const std::vector<std::string>& edge_names, const std::string& where) {
    if (spec.contains("regex")) {
        RegexError err;
        auto ast = parse_regex(spec.at("regex").get<std::string>(), edge_names, &err);
        if (!ast)
            bail(where, "regex error at offset " + std::to_string(err.position) + ": " + err.message);
        return regex_to_dfa(*ast, ne);
    }
    if (!spec.contains("dfa")) bail(where, "expected a \"regex\" or \"dfa\" section");
    const json& d = spec.at("dfa");
    std::map<std::string, int> state_ids;
    std::vector<std::string> state_names;
    for (auto& s : d.at("states")) {
        std::string name = s.get<std::string>();
        if (!state_ids.emplace(name, static_cast<int>(state_names.size())).second)
            bail(where, "duplicate state '" + name + "'");
        state_names.push_back(name);
    }
    const int ns = static_cast<int>(state_names.size());
    if (ns == 0) bail(where, "automaton needs at least one state");

    Fa nfa;
    nfa.kind = FaKind::Nfa;
    nfa.num_states = ns;
    nfa.num_symbols = ne;
    nfa.initial = lookup(state_ids, d.at("initial").get<std::string>(), where + ".initial");
    nfa.accepting.assign(ns, 0);
    for (auto& s : d.at("accepting"))
        nfa.accepting[lookup(state_ids, s.get<std::string>(), where + ".accepting")] = 1;

    std::vector<std::map<int, std::vector<int>>> moves(ns);
    bool deterministic = true;
    for (auto& t : d.at("transitions")) {
        int from = lookup(state_ids, t.at("from").get<std::string>(), where + ".transitions");
        int on = lookup(edge_ids, t.at("on").get<std::string>(), where + ".transitions");
        int to = lookup(state_ids, t.at("to").get<std::string>(), where + ".transitions");
        auto& ts = moves[from][on];
        ts.push_back(to);
        if (ts.size() > 1) deterministic = false;
    }
    if (deterministic) {
        // keep the listed structure verbatim so print/parse round-trips
        Fa dfa;
        dfa.kind = FaKind::DfaPartial;
        dfa.num_states = ns;
        dfa.num_symbols = ne;
        dfa.initial = nfa.initial;
        dfa.accepting = nfa.accepting;
        dfa.delta.assign(static_cast<size_t>(ns) * ne, -1);
        bool total = true;
        for (int s = 0; s < ns; ++s)
            for (int e = 0; e < ne; ++e) {
                auto it = moves[s].find(e);
                if (it == moves[s].end())
                    total = false;
                else
                    dfa.delta[static_cast<size_t>(s) * ne + e] = it->second[0];
            }
        if (total) {
            dfa.kind = FaKind::DfaTotal;
            return dfa;
        }
        return totalize(dfa);
    }
    nfa.moves.resize(ns);
    for (int s = 0; s < ns; ++s)
        for (auto& [sym, ts] : moves[s]) {
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            nfa.moves[s].push_back({sym, ts});
        }
    return determinize(nfa);
}

} // namespace

InstanceDoc parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("instance parse error: " + std::string(e.what()));
    }

    InstanceDoc out;
    DeceptionInstance& inst = out.instance;
    WorldGraph& w = inst.world;
    const json& jw = doc.at("world");

    std::map<std::string, int> vertex_ids, edge_ids, event_ids, sensor_ids;
    for (auto& v : jw.at("vertices")) {
        std::string name = v.get<std::string>();
        if (!vertex_ids.emplace(name, w.num_vertices++).second)
            bail("world.vertices", "duplicate vertex '" + name + "'");
        w.vertex_names.push_back(name);
    }
    w.initial_vertex = lookup(vertex_ids, jw.at("initial").get<std::string>(), "world.initial");

    for (auto& s : jw.at("sensors")) {
        std::string name = s.at("id").get<std::string>();
        if (!sensor_ids.emplace(name, w.num_sensors++).second)
            bail("world.sensors", "duplicate sensor '" + name + "'");
        w.sensor_names.push_back(name);
        std::vector<int> events;
        for (auto& y : s.at("events")) {
            std::string yn = y.get<std::string>();
            if (!event_ids.emplace(yn, w.num_events).second)
                bail("world.sensors", "event '" + yn + "' listed twice");
            w.event_names.push_back(yn);
            w.event_sensor.push_back(w.num_sensors - 1);
            events.push_back(w.num_events++);
        }
        w.sensor_events.push_back(std::move(events));
    }

    for (auto& e : jw.at("edges")) {
        std::string name = e.at("id").get<std::string>();
        if (!edge_ids.emplace(name, static_cast<int>(w.edges.size())).second)
            bail("world.edges", "duplicate edge '" + name + "'");
        w.edge_names.push_back(name);
        WorldGraph::Edge edge;
        edge.src = lookup(vertex_ids, e.at("src").get<std::string>(), "world.edges[" + name + "]");
        edge.tgt = lookup(vertex_ids, e.at("tgt").get<std::string>(), "world.edges[" + name + "]");
        for (auto& y : e.at("obs"))
            edge.obs.push_back(lookup(event_ids, y.get<std::string>(), "world.edges[" + name + "].obs"));
        std::sort(edge.obs.begin(), edge.obs.end());
        edge.obs.erase(std::unique(edge.obs.begin(), edge.obs.end()), edge.obs.end());
        w.edges.push_back(std::move(edge));
    }

    auto diags = validate(w);
    if (!diags.empty()) bail("world", diags.front());

    const int ne = static_cast<int>(w.edges.size());
    inst.itinerary = automaton_from_json(doc.at("itinerary"), edge_ids, ne, w.edge_names, "itinerary");
    inst.deviation = automaton_from_json(doc.at("deviation"), edge_ids, ne, w.edge_names, "deviation");

    // identity-free default rule with sparse overrides
    Cost diag{Rational(0)}, offdiag{Rational(1)};
    if (doc.contains("cost")) {
        const json& jc = doc.at("cost");
        if (jc.contains("default_diagonal")) diag = parse_cost(jc.at("default_diagonal"), "cost");
        if (jc.contains("default_offdiagonal"))
            offdiag = parse_cost(jc.at("default_offdiagonal"), "cost");
    }
    inst.cost.num_events = w.num_events;
    inst.cost.table.assign(static_cast<size_t>(w.num_events) * w.num_events, offdiag);
    for (int y = 0; y < w.num_events; ++y) inst.cost.at(y, y) = diag;
    if (doc.contains("cost") && doc.at("cost").contains("overrides"))
        for (auto& o : doc.at("cost").at("overrides")) {
            int from = lookup(event_ids, o.at("from").get<std::string>(), "cost.overrides");
            int to = lookup(event_ids, o.at("to").get<std::string>(), "cost.overrides");
            inst.cost.at(from, to) = parse_cost(o.at("cost"), "cost.overrides");
        }

    if (doc.contains("budget")) {
        const json& b = doc.at("budget");
        out.budget = b.is_string() ? Rational::parse(b.get<std::string>())
                                   : Rational(b.get<long long>());
    }
    return out;
}

std::string print_instance(const DeceptionInstance& instance, const std::optional<Rational>& budget) {
    const WorldGraph& w = instance.world;
    ordered_json doc;
    doc["world"]["vertices"] = w.vertex_names;
    doc["world"]["initial"] = w.vertex_names[w.initial_vertex];
    auto& sensors = doc["world"]["sensors"];
    sensors = ordered_json::array();
    for (int s = 0; s < w.num_sensors; ++s) {
        ordered_json js;
        js["id"] = w.sensor_names[s];
        auto& evs = js["events"];
        evs = ordered_json::array();
        for (int y : w.sensor_events[s]) evs.push_back(w.event_names[y]);
        sensors.push_back(std::move(js));
    }
    auto& edges = doc["world"]["edges"];
    edges = ordered_json::array();
    for (size_t e = 0; e < w.edges.size(); ++e) {
        ordered_json je;
        je["id"] = w.edge_names[e];
        je["src"] = w.vertex_names[w.edges[e].src];
        je["tgt"] = w.vertex_names[w.edges[e].tgt];
        auto& obs = je["obs"];
        obs = ordered_json::array();
        for (int y : w.edges[e].obs) obs.push_back(w.event_names[y]);
        edges.push_back(std::move(je));
    }

    auto dump_dfa = [&](const Fa& fa) {
        ordered_json jd;
        auto& states = jd["states"];
        states = ordered_json::array();
        for (int s = 0; s < fa.num_states; ++s) states.push_back("q" + std::to_string(s));
        jd["initial"] = "q" + std::to_string(fa.initial);
        auto& acc = jd["accepting"];
        acc = ordered_json::array();
        for (int s = 0; s < fa.num_states; ++s)
            if (fa.accepting[s]) acc.push_back("q" + std::to_string(s));
        auto& trans = jd["transitions"];
        trans = ordered_json::array();
        for (int s = 0; s < fa.num_states; ++s)
            for (int e = 0; e < fa.num_symbols; ++e) {
                State t = fa.dfa_next(s, e);
                if (t < 0) continue;
                ordered_json jt;
                jt["from"] = "q" + std::to_string(s);
                jt["on"] = w.edge_names[e];
                jt["to"] = "q" + std::to_string(t);
                trans.push_back(std::move(jt));
            }
        ordered_json out;
        out["dfa"] = std::move(jd);
        return out;
    };
    doc["itinerary"] = dump_dfa(instance.itinerary);
    doc["deviation"] = dump_dfa(instance.deviation);

    // reconstruct the sparse cost section: defaults plus deviating entries
    doc["cost"]["default_diagonal"] = instance.cost.num_events ? instance.cost.at(0, 0).str() : "0";
    Cost offdiag = Cost(Rational(1));
    if (w.num_events > 1) offdiag = instance.cost.at(0, 1);
    doc["cost"]["default_offdiagonal"] = offdiag.str();
    Cost diag = instance.cost.num_events ? instance.cost.at(0, 0) : Cost(Rational(0));
    auto& overrides = doc["cost"]["overrides"];
    overrides = ordered_json::array();
    for (int y = 0; y < w.num_events; ++y)
        for (int t = 0; t < w.num_events; ++t) {
            const Cost& c = instance.cost.at(y, t);
            const Cost& def = (y == t) ? diag : offdiag;
            if (c == def) continue;
            ordered_json jo;
            jo["from"] = w.event_names[y];
            jo["to"] = w.event_names[t];
            jo["cost"] = c.str();
            overrides.push_back(std::move(jo));
        }
    if (budget) doc["budget"] = budget->str();
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// random instances

InstanceDoc gen_random(const GenParams& params) {
    if (params.num_events < 2) bail("gen_random", "need at least two events");
    if (params.num_vertices < 1 || params.num_edges < 1) bail("gen_random", "degenerate world");

    for (int attempt = 0; attempt <= params.certifying_attempts; ++attempt) {
        std::mt19937_64 rng(params.seed + 0x9e3779b97f4a7c15ull * attempt);
        auto pick = [&](int n) { return static_cast<int>(rng() % n); };

        InstanceDoc out;
        WorldGraph& w = out.instance.world;
        w.num_vertices = params.num_vertices;
        w.initial_vertex = 0;
        for (int v = 0; v < w.num_vertices; ++v) w.vertex_names.push_back("v" + std::to_string(v));

        // sensors of one or two events
        int y = 0;
        while (y < params.num_events) {
            int size = (params.num_events - y >= 2 && rng() % 2) ? 2 : 1;
            std::vector<int> evs;
            for (int i = 0; i < size; ++i) {
                w.event_names.push_back("y" + std::to_string(y));
                w.event_sensor.push_back(w.num_sensors);
                evs.push_back(y++);
            }
            w.sensor_events.push_back(std::move(evs));
            w.sensor_names.push_back("s" + std::to_string(w.num_sensors));
            w.num_sensors++;
        }
        w.num_events = params.num_events;

        // edges; the first leaves the initial vertex so walks exist, and when
        // m >= 2 the first edge observes two events, which keeps Sigma strictly
        // larger than Z (multiplicity-2 letters are never realizable)
        int m = std::max(2, params.m);
        int usable = params.num_events;
        for (int e = 0; e < params.num_edges; ++e) {
            WorldGraph::Edge edge;
            edge.src = e == 0 ? w.initial_vertex : pick(w.num_vertices);
            edge.tgt = pick(w.num_vertices);
            int size = e == 0 ? std::min(2, usable) : 1 + pick(std::min(m, usable));
            while (static_cast<int>(edge.obs.size()) < size) {
                int ev = pick(usable);
                if (std::find(edge.obs.begin(), edge.obs.end(), ev) == edge.obs.end())
                    edge.obs.push_back(ev);
            }
            std::sort(edge.obs.begin(), edge.obs.end());
            w.edges.push_back(std::move(edge));
            w.edge_names.push_back("e" + std::to_string(e));
        }

        const int ne = static_cast<int>(w.edges.size());
        auto random_dfa = [&](double density) {
            Fa fa;
            fa.kind = FaKind::DfaTotal;
            fa.num_states = 2 + pick(2);
            fa.num_symbols = ne;
            fa.initial = 0;
            fa.accepting.assign(fa.num_states, 0);
            for (int s = 0; s < fa.num_states; ++s)
                fa.accepting[s] = (rng() % 1000) < static_cast<unsigned>(density * 1000);
            fa.delta.resize(static_cast<size_t>(fa.num_states) * ne);
            for (auto& t : fa.delta) t = pick(fa.num_states);
            return fa;
        };
        out.instance.itinerary = random_dfa(params.itinerary_density);
        out.instance.deviation = random_dfa(params.deviation_density);

        // unit-style costs with occasional surcharges and rare infinities
        CostFunction c;
        c.num_events = w.num_events;
        c.table.assign(static_cast<size_t>(w.num_events) * w.num_events, Cost(Rational(1)));
        for (int a = 0; a < w.num_events; ++a) {
            for (int b = 0; b < w.num_events; ++b) {
                if (a == b) {
                    c.at(a, b) = Cost(Rational(0));
                    continue;
                }
                unsigned r = rng() % 8;
                if (r == 0)
                    c.at(a, b) = Cost::inf();
                else if (r == 1)
                    c.at(a, b) = Cost(Rational(2));
            }
        }
        out.instance.cost = std::move(c);

        if (!validate(w).empty()) continue; // defensive; should not happen
        if (!params.require_certifying) return out;
        if (is_certifying(w, out.instance.itinerary).certifying) return out;
    }
    bail("gen_random", "could not find a certifying instance within the attempt budget");
}

// ---------------------------------------------------------------------------
// digraphs and alteration maps

std::pair<Digraph, PairSet> parse_digraph(const std::string& text) {
    Digraph g;
    PairSet pairs;
    std::map<std::string, int> ids;
    auto node = [&](const std::string& n) {
        auto it = ids.find(n);
        if (it != ids.end()) return it->second;
        ids.emplace(n, g.num_nodes);
        g.node_names.push_back(n);
        return g.num_nodes++;
    };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        std::string a, b;
        if (kw == "node") {
            if (!(ls >> a)) bail("digraph", "line " + std::to_string(lineno) + ": node needs a name");
            node(a);
        } else if (kw == "arc" || kw == "pair") {
            if (!(ls >> a >> b))
                bail("digraph", "line " + std::to_string(lineno) + ": " + kw + " needs two endpoints");
            if (kw == "arc")
                g.arcs.push_back({node(a), node(b)});
            else
                pairs.push_back({node(a), node(b)});
        } else {
            bail("digraph", "line " + std::to_string(lineno) + ": unknown directive '" + kw + "'");
        }
    }
    return {g, pairs};
}

SensorAlteration parse_alteration(const std::string& text, const WorldGraph& world) {
    std::map<std::string, int> event_ids;
    for (int y = 0; y < world.num_events; ++y) event_ids.emplace(world.event_names[y], y);
    SensorAlteration a = SensorAlteration::identity(world.num_events);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string from, to;
        std::istringstream ls(line);
        if (!(ls >> from)) continue;
        if (!(ls >> to)) bail("alteration", "line " + std::to_string(lineno) + ": missing target");
        if (to == "->" && !(ls >> to))
            bail("alteration", "line " + std::to_string(lineno) + ": missing target");
        a.to[lookup(event_ids, from, "alteration")] = lookup(event_ids, to, "alteration");
    }
    return a;
}

// ---------------------------------------------------------------------------
// structured output

std::string structured_plan_result(const DeceptionInstance& instance, const PlanResult& result,
                                   const std::optional<Rational>& budget, const ModelStats* stats) {
    ordered_json doc;
    doc["status"] = result.status == PlanStatus::Optimal ? "optimal" : "infeasible";
    if (result.status == PlanStatus::Optimal) {
        doc["cost"] = result.cost.str();
        ordered_json alt = ordered_json::object();
        int changed = 0;
        for (int y = 0; y < instance.world.num_events; ++y)
            if (result.alteration.to[y] != y) {
                alt[instance.world.event_names[y]] = instance.world.event_names[result.alteration.to[y]];
                ++changed;
            }
        doc["alteration"] = std::move(alt);
        doc["altered_events"] = changed;
    } else {
        doc["certificate"] = result.certificate;
    }
    if (budget) {
        bool yes = result.status == PlanStatus::Optimal && !result.cost.infinite &&
                   result.cost.value <= *budget;
        doc["budget"] = budget->str();
        doc["budget_verdict"] = yes ? "yes" : "no";
    }
    doc["nodes_expanded"] = result.nodes_expanded;
    if (stats) {
        ordered_json js;
        for (auto& [k, v] : std::map<std::string, size_t>(stats->variable_counts.begin(),
                                                          stats->variable_counts.end()))
            js["variables"][k] = v;
        for (auto& [k, v] : std::map<std::string, size_t>(stats->constraint_counts.begin(),
                                                          stats->constraint_counts.end()))
            js["constraints"][k] = v;
        doc["model_stats"] = std::move(js);
    }
    return doc.dump(2) + "\n";
}

std::string structured_verdict(const DeceptionInstance& instance, const DeceptionVerdict& verdict) {
    ordered_json doc;
    doc["deceptive"] = verdict.deceptive;
    if (!verdict.deceptive) {
        ordered_json walk = ordered_json::array();
        for (int e : verdict.witness_walk) walk.push_back(instance.world.edge_names[e]);
        doc["witness_walk"] = std::move(walk);
        ordered_json obs = ordered_json::array();
        for (int x : verdict.witness_obs) {
            ordered_json letter = ordered_json::array();
            for (auto& [ev, k] : instance.sigma.symbols[x].items)
                for (int i = 0; i < k; ++i) letter.push_back(instance.world.event_names[ev]);
            obs.push_back(std::move(letter));
        }
        doc["witness_observation"] = std::move(obs);
    }
    return doc.dump(2) + "\n";
}

std::string structured_certifying(const WorldGraph& world, const CertifyingVerdict& verdict) {
    ordered_json doc;
    doc["certifying"] = verdict.certifying;
    if (!verdict.certifying) {
        ordered_json a = ordered_json::array(), b = ordered_json::array();
        for (int e : verdict.inside) a.push_back(world.edge_names[e]);
        for (int e : verdict.outside) b.push_back(world.edge_names[e]);
        doc["itinerary_walk"] = std::move(a);
        doc["outside_walk"] = std::move(b);
    }
    return doc.dump(2) + "\n";
}

} // namespace deceptiplan
