#include "topicnet/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topicnet {

using nlohmann::json;

namespace {

json graph_to_json_obj(const LabeledDigraph& g) {
    json vertices = json::array();
    for (const auto& v : g.vertices())
        vertices.push_back({{"id", v.id}, {"label", v.label}, {"weight", v.weight}});
    json arcs = json::array();
    for (const auto& a : g.arcs())
        arcs.push_back({{"src", g.vertex(a.src).id},
                        {"dst", g.vertex(a.dst).id},
                        {"weight", a.weight},
                        {"kind", a.kind}});
    return json{{"vertices", vertices}, {"arcs", arcs}};
}

LabeledDigraph graph_from_json_obj(const json& j) {
    std::vector<LabeledDigraph::Vertex> vertices;
    for (const auto& v : j.value("vertices", json::array())) {
        vertices.push_back({v.at("id").get<std::string>(),
                            v.value("label", v.at("id").get<std::string>()),
                            v.value("weight", 1.0)});
    }
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& a : j.value("arcs", json::array())) {
        arcs.push_back({a.at("src").get<std::string>(), a.at("dst").get<std::string>(),
                        a.value("weight", 1.0), a.value("kind", std::string())});
    }
    return LabeledDigraph(std::move(vertices), arcs);
}

}  // namespace

std::string graph_to_json(const LabeledDigraph& g) { return graph_to_json_obj(g).dump(2); }

LabeledDigraph graph_from_json(const std::string& text) {
    return graph_from_json_obj(json::parse(text));
}

LabeledDigraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return graph_from_json(buffer.str());
}

void save_graph(const LabeledDigraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << graph_to_json(g) << '\n';
}

std::string graph_to_dot(const LabeledDigraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    for (const auto& v : g.vertices())
        out << "  \"" << v.id << "\" [label=\"" << v.label << " (" << v.weight << ")\"];\n";
    for (const auto& a : g.arcs())
        out << "  \"" << g.vertex(a.src).id << "\" -> \"" << g.vertex(a.dst).id
            << "\" [label=\"" << a.weight << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace topicnet
