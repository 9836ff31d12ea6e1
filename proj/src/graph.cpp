#include "topicnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

#include "topicnet/stats.hpp"

namespace topicnet {

LabeledDigraph::LabeledDigraph(std::vector<Vertex> vertices, const std::vector<ArcSpec>& arcs)
    : vertices_(std::move(vertices)) {
    id_index_.reserve(vertices_.size());
    label_index_.reserve(vertices_.size());
    for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
        const Vertex& v = vertices_[i];
        if (v.weight < 0.0) throw std::invalid_argument("vertex weight must be non-negative: " + v.id);
        if (!id_index_.emplace(v.id, i).second)
            throw std::invalid_argument("duplicate vertex id: " + v.id);
        if (!label_index_.emplace(v.label, i).second)
            throw std::invalid_argument("duplicate vertex label: " + v.label);
    }
    arcs_.reserve(arcs.size());
    for (const ArcSpec& a : arcs) {
        auto s = find_id(a.src);
        auto d = find_id(a.dst);
        if (!s || !d) throw std::invalid_argument("arc endpoint not in graph: " + a.src + "->" + a.dst);
        if (a.weight < 0.0) throw std::invalid_argument("arc weight must be non-negative");
        arcs_.push_back(Arc{*s, *d, a.weight, a.kind});
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (std::size_t i = 1; i < arcs_.size(); ++i) {
        if (arcs_[i - 1].src == arcs_[i].src && arcs_[i - 1].dst == arcs_[i].dst)
            throw std::invalid_argument("duplicate arc: " + vertices_[arcs_[i].src].id + "->" +
                                        vertices_[arcs_[i].dst].id);
    }
    out_offsets_.assign(vertices_.size() + 1, 0);
    in_degree_.assign(vertices_.size(), 0);
    for (const Arc& a : arcs_) {
        ++out_offsets_[a.src + 1];
        ++in_degree_[a.dst];
    }
    for (std::size_t i = 1; i < out_offsets_.size(); ++i) out_offsets_[i] += out_offsets_[i - 1];
}

std::optional<std::uint32_t> LabeledDigraph::find_id(const std::string& id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> LabeledDigraph::find_label(const std::string& label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

const LabeledDigraph::Arc* LabeledDigraph::find_arc(std::uint32_t src, std::uint32_t dst) const {
    auto begin = arcs_.begin() + out_offsets_[src];
    auto end = arcs_.begin() + out_offsets_[src + 1];
    auto it = std::lower_bound(begin, end, dst,
                               [](const Arc& a, std::uint32_t d) { return a.dst < d; });
    if (it == end || it->dst != dst) return nullptr;
    return &*it;
}

std::span<const LabeledDigraph::Arc> LabeledDigraph::out_arcs(std::uint32_t v) const {
    return {arcs_.data() + out_offsets_[v], arcs_.data() + out_offsets_[v + 1]};
}

std::size_t LabeledDigraph::total_degree(std::uint32_t v) const {
    return (out_offsets_[v + 1] - out_offsets_[v]) + in_degree_[v];
}

double LabeledDigraph::max_arc_weight() const {
    double m = 0.0;
    for (const Arc& a : arcs_) m = std::max(m, a.weight);
    return m;
}

UndirectedView::UndirectedView(const LabeledDigraph& g) {
    neighbors_.resize(g.vertex_count());
    for (const auto& a : g.arcs()) {
        if (a.src == a.dst) continue;
        auto key = std::minmax(a.src, a.dst);
        auto [it, inserted] = weights_.try_emplace({key.first, key.second}, a.weight);
        if (!inserted) it->second = 0.5 * (it->second + a.weight);
    }
    for (const auto& [edge, w] : weights_) {
        neighbors_[edge.first].push_back(edge.second);
        neighbors_[edge.second].push_back(edge.first);
        max_weight_ = std::max(max_weight_, w);
    }
    for (auto& adj : neighbors_) std::sort(adj.begin(), adj.end());
}

bool UndirectedView::has_edge(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return false;
    auto key = std::minmax(a, b);
    return weights_.count({key.first, key.second}) > 0;
}

double UndirectedView::edge_weight(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 0.0;
    auto key = std::minmax(a, b);
    auto it = weights_.find({key.first, key.second});
    return it == weights_.end() ? 0.0 : it->second;
}

LabeledDigraph orbit(const LabeledDigraph& g, const std::string& vertex_id, std::size_t radius) {
    auto start = g.find_id(vertex_id);
    if (!start) throw std::invalid_argument("orbit: unknown vertex id " + vertex_id);

    std::vector<std::size_t> dist(g.vertex_count(), std::numeric_limits<std::size_t>::max());
    std::deque<std::uint32_t> queue;
    dist[*start] = 0;
    queue.push_back(*start);
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        if (dist[v] >= radius) continue;
        for (const auto& a : g.out_arcs(v)) {
            if (dist[a.dst] == std::numeric_limits<std::size_t>::max()) {
                dist[a.dst] = dist[v] + 1;
                queue.push_back(a.dst);
            }
        }
    }

    std::vector<LabeledDigraph::Vertex> vertices;
    std::vector<bool> keep(g.vertex_count(), false);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        if (dist[v] <= radius) {
            keep[v] = true;
            vertices.push_back(g.vertex(v));
        }
    }
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& a : g.arcs()) {
        if (keep[a.src] && keep[a.dst])
            arcs.push_back({g.vertex(a.src).id, g.vertex(a.dst).id, a.weight, a.kind});
    }
    return LabeledDigraph(std::move(vertices), arcs);
}

LabeledDigraph er_rewire(const LabeledDigraph& g, std::uint64_t seed) {
    std::size_t n = g.vertex_count();
    std::size_t m = g.arc_count();
    if (m > n * n) throw std::invalid_argument("er_rewire: more arcs than vertex pairs");
    Rng rng(seed);

    // Floyd's sampling of m distinct cells from the n*n ordered-pair space.
    std::vector<std::uint64_t> cells;
    cells.reserve(m);
    std::unordered_map<std::uint64_t, bool> chosen;
    for (std::uint64_t j = static_cast<std::uint64_t>(n) * n - m; j < static_cast<std::uint64_t>(n) * n; ++j) {
        std::uint64_t t = rng.next_index(j + 1);
        if (chosen.count(t)) t = j;
        chosen.emplace(t, true);
        cells.push_back(t);
    }
    std::sort(cells.begin(), cells.end());

    std::vector<std::pair<double, std::string>> payload;
    payload.reserve(m);
    for (const auto& a : g.arcs()) payload.emplace_back(a.weight, a.kind);
    rng.shuffle(payload);

    std::vector<LabeledDigraph::ArcSpec> arcs;
    arcs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t src = static_cast<std::uint32_t>(cells[i] / n);
        std::uint32_t dst = static_cast<std::uint32_t>(cells[i] % n);
        arcs.push_back({g.vertex(src).id, g.vertex(dst).id, payload[i].first, payload[i].second});
    }
    return LabeledDigraph(g.vertices(), arcs);
}

namespace {

void single_source_hops(const LabeledDigraph& g, std::uint32_t s, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), -1.0);
    std::deque<std::uint32_t> queue;
    out[s] = 0.0;
    queue.push_back(s);
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        for (const auto& a : g.out_arcs(v)) {
            if (out[a.dst] < 0.0) {
                out[a.dst] = out[v] + 1.0;
                queue.push_back(a.dst);
            }
        }
    }
}

void single_source_dijkstra(const LabeledDigraph& g, std::uint32_t s, double max_weight,
                            std::vector<double>& out) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::fill(out.begin(), out.end(), kInf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    out[s] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > out[v]) continue;
        for (const auto& a : g.out_arcs(v)) {
            double len = max_weight / a.weight;  // 1 / (weight / max)
            double nd = d + len;
            if (nd < out[a.dst]) {
                out[a.dst] = nd;
                heap.push({nd, a.dst});
            }
        }
    }
}

}  // namespace

DenseMatrix geodesic_matrix(const LabeledDigraph& g, bool weighted, double cap) {
    std::size_t n = g.vertex_count();
    DenseMatrix result(n);
    double sentinel = static_cast<double>(n);
    double max_weight = 0.0;
    if (weighted) {
        for (const auto& a : g.arcs())
            if (a.weight <= 0.0)
                throw std::invalid_argument("geodesic_matrix: weighted mode needs positive arc weights");
        max_weight = g.max_arc_weight();
    }

    std::vector<double> row(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        if (weighted)
            single_source_dijkstra(g, s, max_weight, row);
        else
            single_source_hops(g, s, row);
        for (std::size_t t = 0; t < n; ++t) {
            double d = row[t];
            bool reachable = weighted ? d != std::numeric_limits<double>::infinity() : d >= 0.0;
            if (!reachable || d > cap || d > sentinel)
                result.at(s, t) = sentinel;
            else
                result.at(s, t) = d;
        }
        result.at(s, s) = 0.0;
    }
    return result;
}

std::array<double, 35> netsimile_features(const LabeledDigraph& g) {
    UndirectedView u(g);
    std::size_t n = u.size();
    if (n == 0) throw std::invalid_argument("netsimile_features: empty graph");

    std::vector<double> degree(n, 0.0), clustering(n, 0.0);
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto& adj = u.neighbors(v);
        degree[v] = static_cast<double>(adj.size());
        if (adj.size() >= 2) {
            std::size_t closed = 0;
            for (std::size_t i = 0; i < adj.size(); ++i)
                for (std::size_t j = i + 1; j < adj.size(); ++j)
                    if (u.has_edge(adj[i], adj[j])) ++closed;
            clustering[v] = 2.0 * static_cast<double>(closed) /
                            (degree[v] * (degree[v] - 1.0));
        }
    }

    std::vector<double> nbr_degree(n, 0.0), nbr_clustering(n, 0.0);
    std::vector<double> ego_edges(n, 0.0), ego_boundary(n, 0.0), ego_neighbors(n, 0.0);
    std::vector<char> in_ego(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto& adj = u.neighbors(v);
        if (!adj.empty()) {
            double dsum = 0.0, csum = 0.0;
            for (auto w : adj) {
                dsum += degree[w];
                csum += clustering[w];
            }
            nbr_degree[v] = dsum / static_cast<double>(adj.size());
            nbr_clustering[v] = csum / static_cast<double>(adj.size());
        }
        in_ego[v] = 1;
        for (auto w : adj) in_ego[w] = 1;

        std::size_t internal_x2 = 0, boundary = 0;
        std::vector<std::uint32_t> outside;
        for (std::uint32_t m : adj) {
            for (auto w : u.neighbors(m)) {
                if (in_ego[w])
                    ++internal_x2;  // counted from both endpoints
                else {
                    ++boundary;
                    outside.push_back(w);
                }
            }
        }
        internal_x2 += adj.size();  // spokes v-w are seen from the w side only
        std::sort(outside.begin(), outside.end());
        outside.erase(std::unique(outside.begin(), outside.end()), outside.end());
        ego_edges[v] = static_cast<double>(internal_x2 / 2);
        ego_boundary[v] = static_cast<double>(boundary);
        ego_neighbors[v] = static_cast<double>(outside.size());

        in_ego[v] = 0;
        for (auto w : adj) in_ego[w] = 0;
    }

    const std::vector<double>* features[7] = {&degree,     &clustering,   &nbr_degree,
                                              &nbr_clustering, &ego_edges, &ego_boundary,
                                              &ego_neighbors};
    std::array<double, 35> out{};
    for (std::size_t f = 0; f < 7; ++f) {
        auto agg = five_point_summary(*features[f]);
        for (std::size_t k = 0; k < 5; ++k) out[f * 5 + k] = agg[k];
    }
    return out;
}

namespace {

enum class PairMode { Intra, Inter, Heter };

bool pair_matches(PairMode mode, const std::string& cv, const std::string& cu,
                  const std::string& cw) {
    switch (mode) {
        case PairMode::Intra:
            return cu == cv && cw == cv;
        case PairMode::Inter:
            return cu == cw && cu != cv;
        case PairMode::Heter:
            return cu != cw && cu != cv && cw != cv;
    }
    return false;
}

}  // namespace

std::array<double, kTypedClusterDims> typed_cluster_vector(
    const LabeledDigraph& g, const std::unordered_map<std::string, std::string>& class_of) {
    UndirectedView u(g);
    std::size_t n = u.size();

    std::vector<const std::string*> cls(n, nullptr);
    for (std::uint32_t v = 0; v < n; ++v) {
        auto it = class_of.find(g.vertex(v).id);
        if (it == class_of.end())
            throw std::invalid_argument("typed_cluster_vector: no class code for vertex " +
                                        g.vertex(v).id);
        cls[v] = &it->second;
    }

    double max_w = u.max_edge_weight();
    auto norm_w = [&](std::uint32_t a, std::uint32_t b) {
        return max_w > 0.0 ? u.edge_weight(a, b) / max_w : 0.0;
    };

    std::array<double, kTypedClusterDims> out{};
    const PairMode modes[3] = {PairMode::Intra, PairMode::Inter, PairMode::Heter};
    for (std::size_t mi = 0; mi < 3; ++mi) {
        PairMode mode = modes[mi];
        double ws_sum = 0.0;
        double closed_wedges = 0.0, all_wedges = 0.0;
        double barrat_sum = 0.0;
        double zh_sum = 0.0;
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto& adj = u.neighbors(v);
            double d = static_cast<double>(adj.size());
            all_wedges += d * (d - 1.0);
            if (adj.size() < 2) continue;

            double matched = 0.0;       // closed neighbor pairs passing the predicate
            double barrat_num = 0.0;    // sum of (w(v,u)+w(v,w)) over those pairs
            double zh_num = 0.0;        // sum of w(v,u)w(u,w)w(w,v) over ordered pairs
            for (std::size_t i = 0; i < adj.size(); ++i) {
                for (std::size_t j = i + 1; j < adj.size(); ++j) {
                    std::uint32_t a = adj[i], b = adj[j];
                    if (!u.has_edge(a, b)) continue;
                    if (!pair_matches(mode, *cls[v], *cls[a], *cls[b])) continue;
                    matched += 1.0;
                    barrat_num += norm_w(v, a) + norm_w(v, b);
                    zh_num += 2.0 * norm_w(v, a) * norm_w(a, b) * norm_w(b, v);
                }
            }
            ws_sum += 2.0 * matched / (d * d - d);
            closed_wedges += 2.0 * matched;

            double strength = 0.0, sq = 0.0;
            for (auto w : adj) {
                double x = norm_w(v, w);
                strength += x;
                sq += x * x;
            }
            if (strength > 0.0) barrat_sum += barrat_num / (strength * (d - 1.0));
            double zh_den = strength * strength - sq;
            if (zh_den > 0.0) zh_sum += zh_num / zh_den;
        }
        double nn = static_cast<double>(n);
        out[mi * 4 + 0] = n > 0 ? ws_sum / nn : 0.0;
        out[mi * 4 + 1] = all_wedges > 0.0 ? closed_wedges / all_wedges : 0.0;
        out[mi * 4 + 2] = n > 0 ? barrat_sum / nn : 0.0;
        out[mi * 4 + 3] = n > 0 ? zh_sum / nn : 0.0;
    }
    return out;
}

}  // namespace topicnet
