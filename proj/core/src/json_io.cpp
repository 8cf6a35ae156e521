#include "coarsecyl/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coarsecyl {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json angle_json(const Angle& a) {
    if (a.is_infinite()) return json("inf");
    return json(a.finite_value());
}

json rational_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}};
}

json verdict_json(Verdict v) { return json(to_string(v)); }

}  // namespace

std::string graph_to_json(const FineGraph& g) {
    json j;
    j["vertices"] = g.vertex_ids();
    j["parabolic"] = g.parabolic_vertices();
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
    j["edges"] = edges;
    if (g.has_action()) {
        json action = json::object();
        for (const auto& [label, perm] : g.action()) {
            json arr = json::array();
            for (const auto& img : perm) {
                if (img.has_value()) arr.push_back(g.id_of(*img));
                else arr.push_back(nullptr);
            }
            action[label] = arr;
        }
        j["action"] = action;
    }
    return dump(j);
}

FineGraph graph_from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<VertexId> vertices = j.at("vertices").get<std::vector<VertexId>>();
    std::vector<VertexId> parabolic;
    if (j.contains("parabolic")) parabolic = j.at("parabolic").get<std::vector<VertexId>>();
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    std::map<std::string, VertexMap> action;
    if (j.contains("action")) {
        for (auto it = j["action"].begin(); it != j["action"].end(); ++it) {
            VertexMap perm;
            for (const auto& img : it.value()) {
                if (img.is_null()) perm.push_back(std::nullopt);
                else perm.push_back(img.get<VertexId>());
            }
            action.emplace(it.key(), std::move(perm));
        }
    }
    return FineGraph(std::move(vertices), std::move(edges), std::move(parabolic),
                     std::move(action));
}

std::string model_to_json(const GraphModel& m) {
    json j = json::parse(graph_to_json(m.graph));
    j["basepoint"] = m.basepoint;
    j["truncation_radius"] = m.truncation_radius;
    j["boundary"] = m.boundary;
    j["truncated_cones"] = m.truncated_cones;
    return dump(j);
}

std::string constants_to_json(const ConstantSet& c) {
    json j;
    j["delta"] = c.delta;
    j["lambda"] = c.lambda;
    j["epsilon"] = c.epsilon;
    j["mu"] = c.mu;
    j["theta"] = c.theta;
    j["rho"] = c.rho;
    j["stability_D"] = c.stability_D;
    j["n_triangle"] = c.n_triangle;
    j["phi_n"] = c.phi_n;
    j["capa_mu"] = c.capa_mu;
    j["l"] = c.l;
    j["regime"] = to_string(c.regime);
    j["provenance"] = c.provenance;
    return dump(j);
}

ConstantSet constants_from_json(const std::string& text) {
    json j = json::parse(text);
    ConstantSet c;
    c.delta = j.at("delta").get<std::int64_t>();
    c.lambda = j.at("lambda").get<std::int64_t>();
    c.epsilon = j.at("epsilon").get<std::int64_t>();
    c.mu = j.at("mu").get<std::int64_t>();
    c.theta = j.at("theta").get<std::int64_t>();
    c.rho = j.at("rho").get<std::int64_t>();
    c.stability_D = j.at("stability_D").get<std::int64_t>();
    c.n_triangle = j.at("n_triangle").get<std::int64_t>();
    c.phi_n = j.at("phi_n").get<std::int64_t>();
    c.capa_mu = j.at("capa_mu").get<std::int64_t>();
    c.l = j.at("l").get<std::int64_t>();
    const std::string regime = j.at("regime").get<std::string>();
    c.regime = regime == "paper-faithful" ? Regime::paper_faithful : Regime::exploratory;
    if (j.contains("provenance"))
        c.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    c.validate();
    return c;
}

std::string cpg_to_json(const CoarsePiecewiseGeodesic& f) {
    json j;
    j["path"] = f.path.vertices;
    j["cuts"] = f.cuts;
    j["l"] = f.l;
    return dump(j);
}

CoarsePiecewiseGeodesic cpg_from_json(const std::string& text, const ConstantSet& c) {
    json j = json::parse(text);
    CoarsePiecewiseGeodesic f;
    f.path.vertices = j.at("path").get<std::vector<VertexId>>();
    f.cuts = j.at("cuts").get<std::vector<std::size_t>>();
    f.l = j.at("l").get<std::int64_t>();
    f.constants = c;
    f.check_structure();
    return f;
}

std::string validation_to_json(const CpgValidation& v) {
    json j;
    j["local_quasi_geodesic"] = verdict_json(v.local_quasi_geodesic);
    j["pieces_local_geodesic"] = verdict_json(v.pieces_local_geodesic);
    j["interior_piece_length"] = verdict_json(v.interior_piece_length);
    j["bridge_length"] = verdict_json(v.bridge_length);
    j["neighborhood"] = verdict_json(v.neighborhood);
    j["overall"] = verdict_json(v.overall());
    return dump(j);
}

std::string cylinder_to_json(const Cylinder& c, bool include_witnesses) {
    json j;
    j["x"] = c.x;
    j["y"] = c.y;
    j["l"] = c.l;
    j["members"] = c.members;
    j["complete"] = c.complete;
    j["constants"] = json::parse(constants_to_json(c.constants));
    if (include_witnesses) {
        json w = json::object();
        for (const auto& [v, cpg] : c.witnesses)
            w[std::to_string(v)] = json::parse(cpg_to_json(cpg));
        j["witnesses"] = w;
    }
    return dump(j);
}

namespace {

json slice_json(const Slice& s) {
    json j;
    j["kind"] = s.kind == SliceKind::parabolic ? "parabolic" : "regular";
    j["members"] = s.members;
    if (s.kind == SliceKind::parabolic) j["angle"] = angle_json(s.angle);
    if (s.flagged_singleton) j["flagged_singleton"] = true;
    return j;
}

}  // namespace

std::string decomposition_to_json(const SliceDecomposition& d) {
    json j;
    j["x"] = d.cyl.x;
    j["y"] = d.cyl.y;
    j["l"] = d.cyl.l;
    json slices = json::array();
    for (const auto& s : d.slices) slices.push_back(slice_json(s));
    j["slices"] = slices;
    return dump(j);
}

std::string triangle_to_json(const TriangleDecomposition& t) {
    json j;
    j["x"] = t.x;
    j["y"] = t.y;
    j["z"] = t.z;
    j["shared_prefix"] = t.shared_prefix;
    j["shared_t"] = t.shared_t;
    j["shared_v"] = t.shared_v;
    auto hole = [](const HoleInfo& h) {
        json hj;
        hj["begin"] = h.begin;
        hj["end"] = h.end;
        hj["size"] = h.size();
        hj["size_bound"] = verdict_json(h.size_bound);
        hj["angle_bound"] = verdict_json(h.angle_bound);
        return hj;
    };
    j["hole_xy"] = hole(t.hole_xy);
    j["hole_xz"] = hole(t.hole_xz);
    j["hole_yz"] = hole(t.hole_yz);
    j["locality"] = verdict_json(t.locality);
    j["hard_failures"] = t.hard_failures;
    j["sides"] = {
        {"xy", json::parse(decomposition_to_json(t.xy))},
        {"xz", json::parse(decomposition_to_json(t.xz))},
        {"yz", json::parse(decomposition_to_json(t.yz))},
    };
    return dump(j);
}

std::string select_l_to_json(const SelectLReport& r) {
    json j;
    j["chosen_l"] = r.chosen_l;
    j["vacuous_only"] = r.vacuous_only;
    json cands = json::array();
    for (const auto& [l, instances] : r.candidates) {
        json cj;
        cj["l"] = l;
        json inst = json::array();
        for (const auto& tri : instances) {
            json tj;
            tj["alpha"] = tri.alpha;
            tj["beta"] = tri.beta;
            tj["gamma"] = tri.gamma.empty() ? "(digon)" : tri.gamma;
            tj["x"] = tri.x;
            tj["y"] = tri.y;
            tj["z"] = tri.z;
            json corners = json::array();
            for (const auto& c : tri.corners) {
                json cc;
                cc["corner"] = c.corner;
                cc["radius"] = rational_json(c.radius);
                cc["vacuous"] = c.vacuous;
                cc["verdict"] = verdict_json(c.verdict);
                corners.push_back(cc);
            }
            tj["corners"] = corners;
            inst.push_back(tj);
        }
        cj["triangles"] = inst;
        cands.push_back(cj);
    }
    j["candidates"] = cands;
    return dump(j);
}

std::string fineness_to_json(const FinenessReport& r) {
    json j;
    j["length_bound"] = r.length_bound;
    j["uniform_bound"] = r.uniform_bound;
    json per_edge = json::array();
    for (const auto& [e, count] : r.per_edge)
        per_edge.push_back(json{{"edge", json::array({e.first, e.second})}, {"circuits", count}});
    j["per_edge"] = per_edge;
    json hist = json::object();
    for (const auto& [count, edges] : r.histogram) hist[std::to_string(count)] = edges;
    j["histogram"] = hist;
    return dump(j);
}

std::string stability_to_json(const StabilityResult& r) {
    json j;
    j["D_emp"] = r.D_emp;
    j["N_emp"] = r.N_emp;
    j["pairs_examined"] = r.pairs_examined;
    j["quasi_geodesics_found"] = r.quasi_geodesics_found;
    return dump(j);
}

std::string skeleton_to_json(const SplittingSkeleton& s, const LaminationResult& lam) {
    json j;
    json vs = json::array();
    for (const auto& v : s.vertices) {
        json vj;
        vj["type_II_component"] = v.is_type_II_component;
        vj["piece"] = v.piece;
        vj["euler"] = v.euler;
        vj["contains_singular"] = v.contains_singular;
        vs.push_back(vj);
    }
    j["vertices"] = vs;
    json es = json::array();
    for (const auto& e : s.edges) {
        json ej;
        ej["component"] = e.component;
        ej["type"] = e.type == ComponentType::type_I ? "I" : "II";
        ej["ends"] = json::array({e.end1, e.end2});
        es.push_back(ej);
    }
    j["edges"] = es;
    j["trivial_splitting"] = s.trivial();
    j["k_edges"] = lam.K.edges.size();
    j["k_components"] = lam.K.component_count;
    std::size_t pruned = 0;
    for (char p : lam.K.component_pruned) pruned += p ? 1 : 0;
    j["k_components_pruned"] = pruned;
    return dump(j);
}

std::string graph_to_dot(const FineGraph& g, const std::vector<VertexId>& highlight) {
    std::ostringstream out;
    out << "graph coarsecyl {\n  node [shape=circle];\n";
    for (VertexId v : g.vertex_ids()) {
        out << "  v" << v;
        const bool hi = std::binary_search(highlight.begin(), highlight.end(), v);
        if (g.is_parabolic(v) && hi)
            out << " [style=filled, fillcolor=orange, shape=doublecircle]";
        else if (g.is_parabolic(v))
            out << " [shape=doublecircle]";
        else if (hi)
            out << " [style=filled, fillcolor=lightblue]";
        out << ";\n";
    }
    for (auto [u, v] : g.edges()) out << "  v" << u << " -- v" << v << ";\n";
    out << "}\n";
    return out.str();
}

std::string decomposition_to_dot(const FineGraph& g, const SliceDecomposition& d) {
    static const char* palette[] = {"lightblue",  "lightyellow", "lightpink",
                                    "lightgreen", "lavender",    "mistyrose",
                                    "honeydew",   "aliceblue"};
    std::ostringstream out;
    out << "graph slices {\n  node [shape=circle, style=filled];\n";
    for (VertexId v : g.vertex_ids()) {
        out << "  v" << v << " [";
        auto it = d.position.find(v);
        if (it != d.position.end()) {
            const Slice& s = d.slices[it->second];
            if (s.kind == SliceKind::parabolic)
                out << "fillcolor=orange, shape=doublecircle, ";
            else
                out << "fillcolor=" << palette[it->second % 8] << ", ";
            out << "label=\"" << v << "\\nS" << it->second << "\"";
        } else {
            out << "fillcolor=white, label=\"" << v << "\"";
        }
        out << "];\n";
    }
    for (auto [u, v] : g.edges()) out << "  v" << u << " -- v" << v << ";\n";
    out << "}\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

}  // namespace coarsecyl
