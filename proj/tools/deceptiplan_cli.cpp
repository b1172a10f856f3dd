#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "deceptiplan/formats.hpp"

using namespace deceptiplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Instance arguments accept a builtin name or a file path.
InstanceDoc load_instance(const std::string& ref) {
    for (auto& name : builtin_names())
        if (name == ref) return builtin_instance(name);
    return parse_instance(slurp(ref));
}

std::string render_alteration(const WorldGraph& w, const SensorAlteration& a) {
    std::ostringstream os;
    bool any = false;
    for (int y = 0; y < w.num_events; ++y)
        if (a.to[y] != y) {
            os << (any ? ", " : "") << w.event_names[y] << " -> " << w.event_names[a.to[y]];
            any = true;
        }
    if (!any) os << "every event is mapped to itself";
    return os.str();
}

// Assumption 1 is advisory: the program stays well-defined on non-certifying
// inputs, so a violation is only warned about and can be skipped entirely.
void warn_if_not_certifying(const std::string& name, DeceptionInstance& inst, bool skip) {
    if (skip) return;
    if (!is_certifying(inst.world, inst.itinerary).certifying)
        std::cerr << "warning: " << name
                  << ": sensor set does not certify the itinerary (Assumption 1 violated); "
                     "results remain well-defined\n";
}

int cmd_plan(const std::string& ref, const std::string& budget_text, const std::string& export_path,
             bool stats, bool structured, bool all, bool skip_certifying) {
    std::vector<std::string> targets;
    if (all)
        targets = builtin_names();
    else
        targets.push_back(ref);

    int worst = kExitOk;
    for (auto& t : targets) {
        InstanceDoc doc = load_instance(t);
        if (!budget_text.empty()) doc.budget = Rational::parse(budget_text);
        warn_if_not_certifying(t, doc.instance, skip_certifying);
        PlanResult result = solve(doc.instance);

        ModelStats ms;
        bool have_stats = stats;
        if (stats || !export_path.empty()) {
            IlpModel model = build_model(doc.instance);
            ms = model_stats(model);
            if (!export_path.empty()) {
                std::ofstream out(export_path, std::ios::binary);
                out << export_lp(model);
            }
        }

        if (structured) {
            if (all) std::cout << "== " << t << "\n";
            std::cout << structured_plan_result(doc.instance, result, doc.budget,
                                                have_stats ? &ms : nullptr);
        } else {
            if (all) std::cout << "== " << t << "\n";
            if (result.status == PlanStatus::Optimal) {
                std::cout << "optimal cost " << result.cost.str() << ": "
                          << render_alteration(doc.instance.world, result.alteration) << "\n";
            } else {
                std::cout << "infeasible: " << result.certificate << "\n";
            }
            if (doc.budget) {
                bool yes = result.status == PlanStatus::Optimal && result.cost.value <= *doc.budget;
                std::cout << "budget " << doc.budget->str() << ": " << (yes ? "yes" : "no") << "\n";
            }
            if (have_stats) {
                std::cout << "model:";
                for (auto& [k, v] :
                     std::map<std::string, size_t>(ms.variable_counts.begin(), ms.variable_counts.end()))
                    std::cout << " " << k << "=" << v;
                std::cout << " constraints=";
                size_t total = 0;
                for (auto& [k, v] : ms.constraint_counts) total += v;
                std::cout << total << "\n";
            }
            std::cout << "nodes expanded: " << result.nodes_expanded << "\n";
        }
        if (result.status == PlanStatus::Infeasible) worst = kExitInfeasible;
    }
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sensor-deception planning toolkit"};
    app.require_subcommand(1);

    std::string instance_ref, budget_text, export_path, alteration_path, assignment_path;
    std::string format = "human";
    bool stats = false, plan_all = false, skip_certifying = false;

    auto* plan = app.add_subcommand("plan", "compute a minimum-cost deceptive alteration");
    plan->add_option("instance", instance_ref, "builtin name or instance file");
    plan->add_flag("--all", plan_all, "run every builtin instance");
    plan->add_option("--budget", budget_text, "decision-variant threshold");
    plan->add_option("--export-lp", export_path, "write the linearized program in LP format");
    plan->add_flag("--stats", stats, "print model statistics");
    plan->add_option("--format", format, "human|structured");
    plan->add_flag("--skip-certifying-check", skip_certifying,
                   "do not warn when Assumption 1 (certifying sensor set) fails");

    auto* verify = app.add_subcommand("verify", "check whether an alteration is deceptive");
    verify->add_option("instance", instance_ref)->required();
    verify->add_option("--alteration", alteration_path, "map file: lines 'from -> to'")->required();
    verify->add_option("--format", format, "human|structured");
    verify->add_flag("--skip-certifying-check", skip_certifying,
                     "do not warn when Assumption 1 (certifying sensor set) fails");

    auto* certify = app.add_subcommand("certify", "check that the sensor set certifies the itinerary");
    certify->add_option("instance", instance_ref)->required();
    certify->add_option("--format", format, "human|structured");

    auto* gen = app.add_subcommand("gen", "emit an instance file");
    std::string gen_what;
    GenParams gp;
    bool gen_dot = false;
    gen->add_option("what", gen_what, "builtin name or 'random'")->required();
    gen->add_flag("--dot", gen_dot, "emit the world graph in DOT format instead");
    gen->add_option("--vertices", gp.num_vertices);
    gen->add_option("--edges", gp.num_edges);
    gen->add_option("--events", gp.num_events);
    gen->add_option("--m", gp.m);
    gen->add_option("--itinerary-density", gp.itinerary_density);
    gen->add_option("--deviation-density", gp.deviation_density);
    gen->add_option("--seed", gp.seed);
    bool gen_certifying = false;
    gen->add_flag("--certifying", gen_certifying, "retry until the instance certifies");

    auto* reduce = app.add_subcommand("reduce", "encode a directed multicut instance as a deception problem");
    std::string digraph_path, pairs_path;
    reduce->add_option("digraph", digraph_path, "arc-list file with node/arc/pair lines")->required();
    reduce->add_option("pairs", pairs_path, "optional separate file holding the pair lines");

    auto* check = app.add_subcommand("check", "evaluate an assignment against the model");
    check->add_option("instance", instance_ref)->required();
    check->add_option("--assignment", assignment_path, "alteration map file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) {
            if (!plan_all && instance_ref.empty())
                throw std::invalid_argument("plan: give an instance or --all");
            return cmd_plan(instance_ref, budget_text, export_path, stats, format == "structured",
                            plan_all, skip_certifying);
        }
        if (verify->parsed()) {
            InstanceDoc doc = load_instance(instance_ref);
            warn_if_not_certifying(instance_ref, doc.instance, skip_certifying);
            SensorAlteration a = parse_alteration(slurp(alteration_path), doc.instance.world);
            DeceptionVerdict v = is_deceptive(doc.instance, a);
            if (format == "structured") {
                std::cout << structured_verdict(doc.instance, v);
            } else if (v.deceptive) {
                std::cout << "deceptive (cost " << total_cost(a, doc.instance.cost).str() << ")\n";
            } else {
                std::cout << "not deceptive; witness walk:";
                for (int e : v.witness_walk) std::cout << " " << doc.instance.world.edge_names[e];
                std::cout << "\n";
            }
            return v.deceptive ? kExitOk : kExitInfeasible;
        }
        if (certify->parsed()) {
            InstanceDoc doc = load_instance(instance_ref);
            CertifyingVerdict v = is_certifying(doc.instance.world, doc.instance.itinerary);
            if (format == "structured") {
                std::cout << structured_certifying(doc.instance.world, v);
            } else if (v.certifying) {
                std::cout << "certifying\n";
            } else {
                std::cout << "not certifying; equal observations:\n  itinerary walk:";
                for (int e : v.inside) std::cout << " " << doc.instance.world.edge_names[e];
                std::cout << "\n  outside walk:  ";
                for (int e : v.outside) std::cout << " " << doc.instance.world.edge_names[e];
                std::cout << "\n";
            }
            return v.certifying ? kExitOk : kExitInfeasible;
        }
        if (gen->parsed()) {
            if (gen_what == "random") {
                gp.require_certifying = gen_certifying;
                if (const char* env = std::getenv("DECEPTIPLAN_SEED")) gp.seed = std::strtoull(env, nullptr, 10);
                InstanceDoc doc = gen_random(gp);
                std::cout << print_instance(doc.instance, doc.budget);
            } else if (gen_what == "fig4") {
                auto [g, pairs] = fig4_multicut();
                std::cout << "# fig4 multicut base instance\n";
                for (auto& n : g.node_names) std::cout << "node " << n << "\n";
                for (auto& [a, b] : g.arcs)
                    std::cout << "arc " << g.node_names[a] << " " << g.node_names[b] << "\n";
                for (auto& [a, b] : pairs)
                    std::cout << "pair " << g.node_names[a] << " " << g.node_names[b] << "\n";
            } else {
                std::string name = gen_what == "department" ? "department-row3" : gen_what;
                InstanceDoc doc = builtin_instance(name);
                if (gen_dot) {
                    const WorldGraph& w = doc.instance.world;
                    std::cout << "digraph world {\n";
                    for (size_t e = 0; e < w.edges.size(); ++e) {
                        std::cout << "  \"" << w.vertex_names[w.edges[e].src] << "\" -> \""
                                  << w.vertex_names[w.edges[e].tgt] << "\" [label=\""
                                  << w.edge_names[e] << ":";
                        for (size_t i = 0; i < w.edges[e].obs.size(); ++i)
                            std::cout << (i ? "," : " ") << w.event_names[w.edges[e].obs[i]];
                        std::cout << "\"];\n";
                    }
                    std::cout << "}\n";
                } else {
                    std::cout << print_instance(doc.instance, doc.budget);
                }
            }
            return kExitOk;
        }
        if (reduce->parsed()) {
            std::string text = slurp(digraph_path);
            if (!pairs_path.empty()) text += "\n" + slurp(pairs_path);
            auto [g, pairs] = parse_digraph(text);
            if (pairs.empty()) throw std::invalid_argument("reduce: no pair lines given");
            auto connected = connectify(g, pairs, 0);
            ReducedInstance reduced = reduce_to_mcsd(connected.graph, connected.pairs);
            std::cout << print_instance(reduced.instance, std::nullopt);
            return kExitOk;
        }
        if (check->parsed()) {
            InstanceDoc doc = load_instance(instance_ref);
            SensorAlteration a = parse_alteration(slurp(assignment_path), doc.instance.world);
            IlpModel model = build_model(doc.instance);
            CheckReport rep = check_assignment(model, assignment_from_alteration(model, a));
            if (rep.linear_satisfied && !rep.divergence()) {
                std::cout << "satisfied\n";
                return kExitOk;
            }
            for (auto& v : rep.violations)
                std::cout << "violated " << v.constraint << ": lhs " << v.lhs.str() << " rhs "
                          << v.rhs.str() << "\n";
            for (auto& v : rep.logical_violations) std::cout << "logical: " << v << "\n";
            if (rep.divergence()) std::cout << "divergence between logical and linearized programs\n";
            return kExitInfeasible;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
