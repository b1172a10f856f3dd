#include <map>
#include <sstream>

#include "deceptiplan/formats.hpp"

namespace deceptiplan {

namespace {

// Department floor plan: two corridor wings K2/K3 around the entrance hall
// K1, rooms A..G. This transcription is the source of truth for the
// built-in department scenarios. Layout notes: two doors between F and G;
// room G has three doors of which the two F-doors share beam b5; o1 covers
// rooms A and C; o3 sits on the window between E and F (no direct E-F
// transit); the F-corridor door carries beam b6; beam b1 spans both
// corridor passages.
const char* kDepartmentWorld = R"json({
  "vertices": ["K1", "K2", "K3", "A", "B", "C", "D", "E", "F", "G"],
  "initial": "K1",
  "sensors": [
    {"id": "b1", "events": ["b1"]},
    {"id": "b2", "events": ["b2"]},
    {"id": "b3", "events": ["b3"]},
    {"id": "b4", "events": ["b4"]},
    {"id": "b5", "events": ["b5"]},
    {"id": "b6", "events": ["b6"]},
    {"id": "o1", "events": ["o1+", "o1-"]},
    {"id": "o2", "events": ["o2+", "o2-"]},
    {"id": "o3", "events": ["o3+", "o3-"]}
  ],
  "edges": [
    {"id": "e1",  "src": "K1", "tgt": "K2", "obs": ["b1"]},
    {"id": "e2",  "src": "K2", "tgt": "K1", "obs": ["b1"]},
    {"id": "e3",  "src": "K2", "tgt": "A",  "obs": ["b3", "o1+"]},
    {"id": "e4",  "src": "A",  "tgt": "K2", "obs": ["b3", "o1-"]},
    {"id": "e5",  "src": "B",  "tgt": "K2", "obs": ["b2", "o2-"]},
    {"id": "e6",  "src": "E",  "tgt": "K3", "obs": ["b4", "o3-"]},
    {"id": "e7",  "src": "K1", "tgt": "C",  "obs": ["b3", "o1+"]},
    {"id": "e8",  "src": "C",  "tgt": "K1", "obs": ["b3", "o1-"]},
    {"id": "e9",  "src": "K1", "tgt": "K3", "obs": ["b1"]},
    {"id": "e10", "src": "K3", "tgt": "K1", "obs": ["b1"]},
    {"id": "e11", "src": "C",  "tgt": "D",  "obs": ["b6", "o1-"]},
    {"id": "e12", "src": "D",  "tgt": "C",  "obs": ["b6", "o1+"]},
    {"id": "e13", "src": "K3", "tgt": "E",  "obs": ["b2", "o3+"]},
    {"id": "e14", "src": "K3", "tgt": "B",  "obs": ["b4", "o2+"]},
    {"id": "e15", "src": "D",  "tgt": "K3", "obs": ["b1"]},
    {"id": "e16", "src": "K2", "tgt": "K3", "obs": ["b2"]},
    {"id": "e17", "src": "K1", "tgt": "G",  "obs": ["b3"]},
    {"id": "e18", "src": "G",  "tgt": "K1", "obs": ["b3"]},
    {"id": "e19", "src": "K1", "tgt": "F",  "obs": ["b6", "o3+"]},
    {"id": "e20", "src": "F",  "tgt": "K1", "obs": ["b6", "o3-"]},
    {"id": "e21", "src": "G",  "tgt": "F",  "obs": ["b5", "o3+"]},
    {"id": "e22", "src": "F",  "tgt": "G",  "obs": ["b5", "o3-"]},
    {"id": "e23", "src": "G",  "tgt": "F",  "obs": ["b5", "o3+"]},
    {"id": "e24", "src": "F",  "tgt": "G",  "obs": ["b5", "o3-"]},
    {"id": "e25", "src": "K3", "tgt": "E",  "obs": ["b4", "o3+"]},
    {"id": "e26", "src": "E",  "tgt": "K3", "obs": ["b2", "o3-"]}
  ]
})json";

const char* kAllEdgesStar =
    "(e1|e2|e3|e4|e5|e6|e7|e8|e9|e10|e11|e12|e13|e14|e15|e16|e17|e18|e19|e20|e21|e22|e23|e24|e25|"
    "e26)*";

std::string department_doc(const std::string& itinerary, const std::string& deviation) {
    std::ostringstream os;
    os << "{\n  \"world\": " << "@WORLD@" << ",\n";
    os << "  \"itinerary\": {\"regex\": \"" << itinerary << "\"},\n";
    os << "  \"deviation\": {\"regex\": \"" << deviation << "\"},\n";
    os << "  \"cost\": {\"default_diagonal\": 0, \"default_offdiagonal\": 1, \"overrides\": []}\n";
    os << "}\n";
    std::string text = os.str();
    std::string world = kDepartmentWorld;
    return text.replace(text.find("@WORLD@"), 7, world.substr(world.find('{')));
}

// Green Vault floor: the lobby plus ten rooms, each watched by a
// motion-style occupancy sensor with a single detection event. Two allowed
// tours (long and short) and the adversary's tour through the opposite wing.
const char* kGreenVault = R"json({
  // Museum-floor scenario: swapping o3<->o10, o4<->o9, o5<->o8 (six unit
  // relabelings, two per physical swap) disguises the red tour as the long
  // allowed tour.
  "world": {
    "vertices": ["lobby", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10"],
    "initial": "lobby",
    "sensors": [
      {"id": "oL", "events": ["oL"]},
      {"id": "o1", "events": ["o1"]},
      {"id": "o2", "events": ["o2"]},
      {"id": "o3", "events": ["o3"]},
      {"id": "o4", "events": ["o4"]},
      {"id": "o5", "events": ["o5"]},
      {"id": "o6", "events": ["o6"]},
      {"id": "o7", "events": ["o7"]},
      {"id": "o8", "events": ["o8"]},
      {"id": "o9", "events": ["o9"]},
      {"id": "o10", "events": ["o10"]}
    ],
    "edges": [
      {"id": "a1", "src": "lobby", "tgt": "R1",  "obs": ["oL", "o1"]},
      {"id": "a2", "src": "R1",    "tgt": "R2",  "obs": ["o2"]},
      {"id": "a3", "src": "R2",    "tgt": "R3",  "obs": ["o3"]},
      {"id": "a4", "src": "R3",    "tgt": "R4",  "obs": ["o4"]},
      {"id": "a5", "src": "R4",    "tgt": "R5",  "obs": ["o5"]},
      {"id": "g3", "src": "R2",    "tgt": "R6",  "obs": ["o6"]},
      {"id": "g4", "src": "R6",    "tgt": "R7",  "obs": ["o7"]},
      {"id": "r3", "src": "R2",    "tgt": "R10", "obs": ["o10"]},
      {"id": "r4", "src": "R10",   "tgt": "R9",  "obs": ["o9"]},
      {"id": "r5", "src": "R9",    "tgt": "R8",  "obs": ["o8"]}
    ]
  },
  "itinerary": {"regex": "a1 a2 (a3 a4 a5 | g3 g4)"},
  "deviation": {"regex": "a1 a2 r3 r4 r5"},
  "cost": {"default_diagonal": 0, "default_offdiagonal": 1, "overrides": []}
})json";

// ---------------------------------------------------------------------------
// 5x5 gridworld. Cells (r,c); doors between all orthogonal neighbours, both
// directions. Fourteen occupancy sensors (two events each): every cell with
// r+c even except the unguarded corner (0,4), plus the two odd cells (0,3)
// and (1,4) next to that corner. Walks therefore fire one event per move
// except around the (0,3)/(0,4)/(1,4) pocket, where two sensors overlap.
// The routes below give optima 9 / 17 / infeasible for the three variants;
// arrow bundles are closed under observation equality so the sensor set
// stays certifying.

bool grid_guarded(int r, int c) {
    if (r == 0 && c == 4) return false;
    if ((r + c) % 2 == 0) return true;
    return (r == 0 && c == 3) || (r == 1 && c == 4);
}

std::string grid_world_json() {
    std::ostringstream os;
    auto cell = [](int r, int c) { return "c" + std::to_string(r) + std::to_string(c); };
    os << "{\n    \"vertices\": [";
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) os << (r + c ? ", " : "") << '"' << cell(r, c) << '"';
    os << "],\n    \"initial\": \"c00\",\n    \"sensors\": [";
    bool first = true;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            if (!grid_guarded(r, c)) continue;
            std::string s = "s" + std::to_string(r) + std::to_string(c);
            os << (first ? "" : ",") << "\n      {\"id\": \"" << s << "\", \"events\": [\"" << s
               << "+\", \"" << s << "-\"]}";
            first = false;
        }
    os << "\n    ],\n    \"edges\": [";
    first = true;
    const int dr[] = {-1, 0, 1, 0}, dc[] = {0, -1, 0, 1};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            for (int d = 0; d < 4; ++d) {
                int r2 = r + dr[d], c2 = c + dc[d];
                if (r2 < 0 || r2 > 4 || c2 < 0 || c2 > 4) continue;
                std::string id = "e" + std::to_string(r) + std::to_string(c) + "_" +
                                 std::to_string(r2) + std::to_string(c2);
                os << (first ? "" : ",") << "\n      {\"id\": \"" << id << "\", \"src\": \""
                   << cell(r, c) << "\", \"tgt\": \"" << cell(r2, c2) << "\", \"obs\": [";
                bool fo = true;
                if (grid_guarded(r, c)) {
                    os << "\"s" << r << c << "-\"";
                    fo = false;
                }
                if (grid_guarded(r2, c2)) os << (fo ? "" : ", ") << "\"s" << r2 << c2 << "+\"";
                os << "]}";
                first = false;
            }
    os << "\n    ]\n  }";
    return os.str();
}

// Start to B=(2,2) through C=(0,2)-then-D=(1,2) or through (1,1), then on to
// E=(4,4) through (2,4) or (3,3); the deviation tours A=(2,0), H=(3,1) and
// F=(4,0) instead and ends next to E without entering it.
const char* kGridItineraryA =
    "( e00_01 e01_02 e02_12 e12_22"
    " | (e00_01 e01_11 | e00_10 e10_11) (e11_12 e12_22 | e11_21 e21_22) )"
    " ( e22_23 e23_24 e24_34 e34_44"
    " | (e22_23 e23_33 | e22_32 e32_33) (e33_34 e34_44 | e33_43 e43_44) )";

const char* kGridDeviationA =
    "e00_10 e10_20 e20_30 e30_31"
    " (e31_41 e41_40 e40_41 e41_42 | e31_21 e21_22 e22_32 e32_42)";

// Five-step extensions: two gray continuations for the itinerary (through
// the sensor pocket to the north-west, or back along the south wall) and one
// red continuation for the deviation.
const char* kGridGraySuffixes =
    " ( e44_34 e34_24 e24_23 e23_13 e13_03 e03_02"
    " | e44_43 e43_42 e42_41 e41_40 e40_30 e30_20 )";

const char* kGridRedSuffixB = " e42_43 e43_33 e33_23 e23_24 e24_14 e14_13";
const char* kGridRedSuffixC2 = " e42_32 e32_31 e31_30 e30_20 e20_10 e10_11";

std::string grid_doc(char variant) {
    std::string itinerary = kGridItineraryA;
    std::string deviation = kGridDeviationA;
    if (variant == 'b') {
        itinerary += kGridGraySuffixes;
        deviation += kGridRedSuffixB;
    } else if (variant == 'c') {
        itinerary += kGridGraySuffixes;
        deviation += std::string(" (") + kGridRedSuffixB + " |" + kGridRedSuffixC2 + " )";
    }
    std::ostringstream os;
    os << "{\n  \"world\": " << grid_world_json() << ",\n";
    os << "  \"itinerary\": {\"regex\": \"" << itinerary << "\"},\n";
    os << "  \"deviation\": {\"regex\": \"" << deviation << "\"},\n";
    os << "  \"cost\": {\"default_diagonal\": 0, \"default_offdiagonal\": 1, \"overrides\": []}\n";
    os << "}\n";
    return os.str();
}

} // namespace

std::pair<Digraph, PairSet> fig4_multicut() {
    // three vertex-disjoint chains; the first is the three-arc path whose
    // last arc sits in the minimum cut
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
    auto arc = [&](const std::string& a, const std::string& b) { g.arcs.push_back({node(a), node(b)}); };
    arc("s1", "a");
    arc("a", "b");
    arc("b", "t1");
    arc("s2", "c");
    arc("c", "t2");
    arc("s3", "d");
    arc("d", "t3");
    pairs.push_back({node("s1"), node("t1")});
    pairs.push_back({node("s2"), node("t2")});
    pairs.push_back({node("s3"), node("t3")});
    return {g, pairs};
}

std::vector<std::string> builtin_names() {
    return {"department-row1", "department-row2", "department-row3", "department-row4",
            "department-row5", "department-row6", "grid-a",          "grid-b",
            "grid-c",          "green-vault",     "fig4-multicut"};
}

InstanceDoc builtin_instance(const std::string& name) {
    if (name == "department-row1")
        return parse_instance(department_doc(kAllEdgesStar, "eps"));
    if (name == "department-row2")
        return parse_instance(department_doc(kAllEdgesStar, kAllEdgesStar));
    if (name == "department-row3")
        return parse_instance(department_doc("e9 e25", "e1 e3"));
    if (name == "department-row4")
        return parse_instance(department_doc(
            "(e1|e2|e9|e10)* (e17|e19) (e21|e22|e23|e24)* (e18|e20)", "e9 e25 e26 e10"));
    if (name == "department-row5")
        return parse_instance(department_doc("e17 (e21|e23) e20", "e7 e11 e15"));
    if (name == "department-row6")
        return parse_instance(
            department_doc("(e17|e19) (e21|e22|e23|e24)* (e18|e20) (e1|e7|e9) (e3 e4)* (e2|e8|e10)",
                           "e7 e11 e15 (e14 e5 e2 | e25 e26 e10)"));
    if (name == "grid-a") return parse_instance(grid_doc('a'));
    if (name == "grid-b") return parse_instance(grid_doc('b'));
    if (name == "grid-c") return parse_instance(grid_doc('c'));
    if (name == "green-vault") return parse_instance(kGreenVault);
    if (name == "fig4-multicut") {
        auto [g, pairs] = fig4_multicut();
        InstanceDoc doc;
        doc.instance = std::move(reduce_to_mcsd(g, pairs).instance);
        return doc;
    }
    throw std::invalid_argument("unknown builtin instance '" + name + "'");
}

} // namespace deceptiplan
