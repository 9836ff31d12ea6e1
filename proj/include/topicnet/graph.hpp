#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicnet/rng.hpp"

namespace topicnet {

// Simple directed graph with non-negative vertex/arc weights and an injective
// vertex labeling. Self-loops are allowed, at most one arc per ordered
// (src, dst) pair. Immutable after construction; all operations on it are
// pure and safe to share between threads.
class LabeledDigraph {
public:
    struct Vertex {
        std::string id;
        std::string label;
        double weight = 0.0;
    };

    struct ArcSpec {
        std::string src;
        std::string dst;
        double weight = 0.0;
        std::string kind;
    };

    struct Arc {
        std::uint32_t src = 0;
        std::uint32_t dst = 0;
        double weight = 0.0;
        std::string kind;
    };

    LabeledDigraph() = default;
    LabeledDigraph(std::vector<Vertex> vertices, const std::vector<ArcSpec>& arcs);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Vertex& vertex(std::uint32_t v) const { return vertices_[v]; }

    std::optional<std::uint32_t> find_id(const std::string& id) const;
    std::optional<std::uint32_t> find_label(const std::string& label) const;
    const Arc* find_arc(std::uint32_t src, std::uint32_t dst) const;

    // Arcs leaving v, sorted by destination.
    std::span<const Arc> out_arcs(std::uint32_t v) const;

    // In-degree + out-degree; a self-loop contributes to both.
    std::size_t total_degree(std::uint32_t v) const;

    // Largest arc weight, 0 for arc-free graphs.
    double max_arc_weight() const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Arc> arcs_;  // sorted by (src, dst)
    std::vector<std::uint32_t> out_offsets_;
    std::vector<std::size_t> in_degree_;
    std::unordered_map<std::string, std::uint32_t> id_index_;
    std::unordered_map<std::string, std::uint32_t> label_index_;
};

// Undirected simplification used by the node-statistics operations below:
// self-loops dropped, antiparallel arc pairs merged into one edge whose
// weight is the mean of the two arc weights.
class UndirectedView {
public:
    explicit UndirectedView(const LabeledDigraph& g);

    std::size_t size() const { return neighbors_.size(); }
    const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return neighbors_[v]; }
    std::size_t degree(std::uint32_t v) const { return neighbors_[v].size(); }
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
    double edge_weight(std::uint32_t a, std::uint32_t b) const;  // 0 when absent
    double max_edge_weight() const { return max_weight_; }
    std::size_t edge_count() const { return weights_.size(); }

private:
    std::vector<std::vector<std::uint32_t>> neighbors_;  // sorted
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> weights_;  // key a < b or a == b excluded
    double max_weight_ = 0.0;
};

// Subgraph induced by all vertices within directed hop distance <= radius of
// the given vertex, keeping every arc among them.
LabeledDigraph orbit(const LabeledDigraph& g, const std::string& vertex_id, std::size_t radius);

// Degree-free randomization: same vertices (ids, labels, weights), same number
// of arcs placed uniformly at random without duplicates, arc weights and kinds
// permuted uniformly. Deterministic per seed.
LabeledDigraph er_rewire(const LabeledDigraph& g, std::uint64_t seed);

struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    explicit DenseMatrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data[r * n + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

// All-pairs shortest path lengths. Unweighted: hop counts. Weighted: arc
// length 1/w_hat with w_hat = weight / max weight, so stronger links shorten
// paths; requires strictly positive arc weights. Unreachable pairs, distances
// above the cap and distances above |V| are all reported as the sentinel |V|.
// The diagonal is 0.
DenseMatrix geodesic_matrix(const LabeledDigraph& g, bool weighted,
                            double cap = std::numeric_limits<double>::infinity());

// Seven per-vertex structural features on the undirected simplification
// (degree, clustering, mean neighbor degree, mean neighbor clustering, egonet
// edges, egonet boundary edges, egonet neighbors), each aggregated by median,
// mean, sd, skewness and kurtosis. Feature-major layout, 35 values.
std::array<double, 35> netsimile_features(const LabeledDigraph& g);

inline constexpr std::size_t kTypedClusterDims = 12;

// Class-sensitive clustering statistics: three neighbor-pair predicates
// (intra, inter, heter) crossed with four clustering bases (mean local,
// global transitivity, arc-weight weighted per Barrat, weight-product per
// Zhang-Horvath). Layout: predicate-major, base-minor. Every vertex id must
// have a class code.
std::array<double, kTypedClusterDims> typed_cluster_vector(
    const LabeledDigraph& g, const std::unordered_map<std::string, std::string>& class_of);

}  // namespace topicnet
