#pragma once

#include <iosfwd>
#include <string>

#include "topicnet/graph.hpp"

namespace topicnet {

// Exchange format:
//   { "vertices": [{"id", "label", "weight"}],
//     "arcs":     [{"src", "dst", "weight", "kind"}] }
std::string graph_to_json(const LabeledDigraph& g);
LabeledDigraph graph_from_json(const std::string& text);

LabeledDigraph load_graph(const std::string& path);
void save_graph(const LabeledDigraph& g, const std::string& path);

// Graphviz export for visual inspection.
std::string graph_to_dot(const LabeledDigraph& g, const std::string& name = "g");

}  // namespace topicnet
