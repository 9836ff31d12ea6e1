#include "topicnet/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace topicnet {

const std::vector<MeasureId>& all_measures() {
    static const std::vector<MeasureId> measures = {
        MeasureId::kGes,           MeasureId::kWal,
        MeasureId::kVeo,           MeasureId::kWges,
        MeasureId::kCosAWeighted,  MeasureId::kCosAvWeighted,
        MeasureId::kCosAvWeightedDegree, MeasureId::kCosAUnweighted,
        MeasureId::kCosAvUnweighted, MeasureId::kNetsimile,
        MeasureId::kTosi,
    };
    return measures;
}

std::string to_string(MeasureId m) {
    switch (m) {
        case MeasureId::kGes: return "ges";
        case MeasureId::kWal: return "wal";
        case MeasureId::kVeo: return "veo";
        case MeasureId::kWges: return "wges";
        case MeasureId::kCosAWeighted: return "cosA_w";
        case MeasureId::kCosAvWeighted: return "cosAV_w_phi1";
        case MeasureId::kCosAvWeightedDegree: return "cosAV_w_phi2";
        case MeasureId::kCosAUnweighted: return "cosA_uw";
        case MeasureId::kCosAvUnweighted: return "cosAV_uw";
        case MeasureId::kNetsimile: return "netsimile";
        case MeasureId::kTosi: return "tosi";
    }
    throw std::invalid_argument("unknown measure id");
}

MeasureId measure_from_string(const std::string& name) {
    for (MeasureId m : all_measures())
        if (to_string(m) == name) return m;
    throw std::invalid_argument("unknown measure name: " + name);
}

bool measure_is_distance(MeasureId m) { return m == MeasureId::kNetsimile; }

double measure_self_value(MeasureId m) { return measure_is_distance(m) ? 0.0 : 1.0; }

std::pair<double, double> measure_range(MeasureId m) {
    if (m == MeasureId::kNetsimile) return {0.0, 35.0};
    return {0.0, 1.0};
}

namespace {

std::set<std::string> vertex_labels(const TopicNetwork& g) {
    std::set<std::string> labels;
    for (const auto& v : g.graph.vertices()) labels.insert(v.label);
    return labels;
}

std::set<std::pair<std::string, std::string>> arc_labels(const TopicNetwork& g) {
    std::set<std::pair<std::string, std::string>> labels;
    for (const auto& a : g.graph.arcs())
        labels.insert({g.graph.vertex(a.src).label, g.graph.vertex(a.dst).label});
    return labels;
}

template <class T>
std::size_t overlap(const std::set<T>& a, const std::set<T>& b) {
    std::size_t count = 0;
    for (const auto& x : a) count += b.count(x);
    return count;
}

// Weight disagreement in [0, 1]; 0 for two zero weights.
double weight_distance(double x, double y) {
    double top = std::max(x, y);
    return top > 0.0 ? std::abs(x - y) / top : 0.0;
}

// Cosine of two equally indexed vectors; identical nonzero vectors score
// exactly 1, zero vectors score 0.
double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    bool identical = a.size() == b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
        identical = identical && a[i] == b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    if (identical) return 1.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double ged(const TopicNetwork& g1, const TopicNetwork& g2) {
    auto v1 = vertex_labels(g1), v2 = vertex_labels(g2);
    auto a1 = arc_labels(g1), a2 = arc_labels(g2);
    double vertex_part = static_cast<double>(v1.size() + v2.size()) -
                         2.0 * static_cast<double>(overlap(v1, v2));
    double arc_part = static_cast<double>(a1.size() + a2.size()) -
                      2.0 * static_cast<double>(overlap(a1, a2));
    return vertex_part + arc_part;
}

double ges(const TopicNetwork& g1, const TopicNetwork& g2) {
    auto v1 = vertex_labels(g1), v2 = vertex_labels(g2);
    auto a1 = arc_labels(g1), a2 = arc_labels(g2);
    auto ratio = [](std::size_t total, std::size_t shared) {
        return total > 0 ? (static_cast<double>(total) - 2.0 * static_cast<double>(shared)) /
                               static_cast<double>(total)
                         : 0.0;
    };
    return 1.0 - 0.5 * (ratio(v1.size() + v2.size(), overlap(v1, v2)) +
                        ratio(a1.size() + a2.size(), overlap(a1, a2)));
}

double wal(const TopicNetwork& g1, const TopicNetwork& g2) {
    auto v1 = vertex_labels(g1), v2 = vertex_labels(g2);
    auto a1 = arc_labels(g1), a2 = arc_labels(g2);
    double shared = static_cast<double>(overlap(v1, v2) + overlap(a1, a2));
    double total = static_cast<double>(v1.size() + v2.size() + a1.size() + a2.size());
    if (total <= 0.0) return 1.0;
    return shared / (total - shared);
}

double veo(const TopicNetwork& g1, const TopicNetwork& g2) {
    auto v1 = vertex_labels(g1), v2 = vertex_labels(g2);
    auto a1 = arc_labels(g1), a2 = arc_labels(g2);
    double total = static_cast<double>(v1.size() + v2.size() + a1.size() + a2.size());
    if (total <= 0.0) return 1.0;
    return 2.0 * static_cast<double>(overlap(v1, v2) + overlap(a1, a2)) / total;
}

double wges(const TopicNetwork& g1, const TopicNetwork& g2) {
    std::map<std::string, double> mu1, mu2;
    for (const auto& v : g1.graph.vertices()) mu1[v.label] = v.weight;
    for (const auto& v : g2.graph.vertices()) mu2[v.label] = v.weight;
    std::map<std::pair<std::string, std::string>, double> nu1, nu2;
    for (const auto& a : g1.graph.arcs())
        nu1[{g1.graph.vertex(a.src).label, g1.graph.vertex(a.dst).label}] = a.weight;
    for (const auto& a : g2.graph.arcs())
        nu2[{g2.graph.vertex(a.src).label, g2.graph.vertex(a.dst).label}] = a.weight;

    auto part = [](const auto& m1, const auto& m2) {
        std::size_t total = m1.size() + m2.size();
        if (total == 0) return 1.0;
        if (m1.empty() || m2.empty()) return 0.0;
        double agreement = 0.0;
        for (const auto& [key, w1] : m1) {
            auto it = m2.find(key);
            if (it != m2.end()) agreement += 1.0 - weight_distance(w1, it->second);
        }
        return 2.0 * agreement / static_cast<double>(total);
    };
    return 0.5 * (part(mu1, mu2) + part(nu1, nu2));
}

AlignedPair align(const TopicNetwork& g1, const TopicNetwork& g2, bool weighted,
                  double distance_cap) {
    AlignedPair pair;
    std::set<std::string> label_union = vertex_labels(g1);
    for (const auto& l : vertex_labels(g2)) label_union.insert(l);
    pair.labels.assign(label_union.begin(), label_union.end());

    std::size_t n = pair.labels.size();
    pair.in_first.assign(n, 0);
    pair.in_second.assign(n, 0);
    pair.mu_first.assign(n, 0.0);
    pair.mu_second.assign(n, 0.0);
    pair.degree_first.assign(n, 0);
    pair.degree_second.assign(n, 0);

    auto padded = [&](const TopicNetwork& g, std::vector<char>& present, std::vector<double>& mu,
                      std::vector<std::size_t>& degree) {
        std::vector<LabeledDigraph::Vertex> vertices;
        vertices.reserve(n);
        for (const auto& label : pair.labels) vertices.push_back({label, label, 0.0});
        std::vector<LabeledDigraph::ArcSpec> arcs;
        for (const auto& a : g.graph.arcs())
            arcs.push_back({g.graph.vertex(a.src).label, g.graph.vertex(a.dst).label, a.weight,
                            a.kind});
        LabeledDigraph aligned(std::move(vertices), arcs);
        for (std::size_t i = 0; i < n; ++i) {
            auto v = g.graph.find_label(pair.labels[i]);
            if (v) {
                present[i] = 1;
                mu[i] = g.graph.vertex(*v).weight;
            }
            degree[i] = aligned.total_degree(static_cast<std::uint32_t>(i));
        }
        return geodesic_matrix(aligned, weighted, distance_cap);
    };

    pair.proximity_first = padded(g1, pair.in_first, pair.mu_first, pair.degree_first);
    pair.proximity_second = padded(g2, pair.in_second, pair.mu_second, pair.degree_second);

    // Distances to proximities: 1 - d/n inside the original graph, 0 on any
    // padded position.
    auto to_proximity = [&](DenseMatrix& m, const std::vector<char>& present) {
        double denom = static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                m.at(r, c) = (present[r] && present[c]) ? 1.0 - m.at(r, c) / denom : 0.0;
    };
    to_proximity(pair.proximity_first, pair.in_first);
    to_proximity(pair.proximity_second, pair.in_second);
    return pair;
}

double cos_graph(const TopicNetwork& g1, const TopicNetwork& g2, const CosineOptions& options) {
    AlignedPair pair = align(g1, g2, options.weighted, options.distance_cap);
    std::size_t n = pair.labels.size();
    if (n == 0) return 0.0;

    std::set<std::string> filter(options.label_filter.begin(), options.label_filter.end());

    double weighted_sum = 0.0;
    double phi_sum = 0.0;
    std::vector<double> row1(n), row2(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!filter.empty() && filter.count(pair.labels[i]) == 0) continue;
        for (std::size_t k = 0; k < n; ++k) {
            row1[k] = pair.proximity_first.at(i, k);
            row2[k] = pair.proximity_second.at(i, k);
        }
        double phi = options.phi == PhiMode::kUniform
                         ? 1.0
                         : static_cast<double>(std::max(pair.degree_first[i], pair.degree_second[i]));
        weighted_sum += phi * cosine(row1, row2);
        phi_sum += phi;
    }
    double arc_part = phi_sum > 0.0 ? weighted_sum / phi_sum : 0.0;
    if (!options.include_vertex_part) return arc_part;

    double vertex_part = cosine(pair.mu_first, pair.mu_second);
    return 0.5 * (vertex_part + arc_part);
}

double netsimile_distance(const TopicNetwork& g1, const TopicNetwork& g2) {
    auto f1 = netsimile_features(g1.graph);
    auto f2 = netsimile_features(g2.graph);
    double distance = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        double denom = std::abs(f1[i] + f2[i]);
        if (denom > 0.0) distance += std::abs(f1[i] - f2[i]) / denom;
    }
    return distance;
}

double tosi(const TopicNetwork& g1, const TopicNetwork& g2, const ClassResolver& class_of) {
    auto classes = [&](const TopicNetwork& g) {
        std::unordered_map<std::string, std::string> out;
        for (const auto& v : g.graph.vertices())
            out[v.id] = class_of ? class_of(v.label) : v.label;
        return out;
    };
    auto t1 = typed_cluster_vector(g1.graph, classes(g1));
    auto t2 = typed_cluster_vector(g2.graph, classes(g2));
    return cosine({t1.begin(), t1.end()}, {t2.begin(), t2.end()});
}

double measure_similarity(MeasureId m, const TopicNetwork& g1, const TopicNetwork& g2,
                          const ClassResolver& class_of) {
    auto cosine_variant = [&](bool weighted, PhiMode phi, bool vertex_part) {
        CosineOptions options;
        options.weighted = weighted;
        options.phi = phi;
        options.include_vertex_part = vertex_part;
        return cos_graph(g1, g2, options);
    };
    switch (m) {
        case MeasureId::kGes: return ges(g1, g2);
        case MeasureId::kWal: return wal(g1, g2);
        case MeasureId::kVeo: return veo(g1, g2);
        case MeasureId::kWges: return wges(g1, g2);
        case MeasureId::kCosAWeighted: return cosine_variant(true, PhiMode::kUniform, false);
        case MeasureId::kCosAvWeighted: return cosine_variant(true, PhiMode::kUniform, true);
        case MeasureId::kCosAvWeightedDegree:
            return cosine_variant(true, PhiMode::kMaxDegree, true);
        case MeasureId::kCosAUnweighted: return cosine_variant(false, PhiMode::kUniform, false);
        case MeasureId::kCosAvUnweighted: return cosine_variant(false, PhiMode::kUniform, true);
        case MeasureId::kNetsimile: return netsimile_distance(g1, g2);
        case MeasureId::kTosi: return tosi(g1, g2, class_of);
    }
    throw std::invalid_argument("unknown measure id");
}

NamedMatrix similarity_matrix(const std::vector<TopicNetwork>& nets, MeasureId m,
                              const ClassResolver& class_of) {
    if (nets.size() < 2) throw std::invalid_argument("similarity_matrix: need >= 2 networks");
    NamedMatrix out;
    out.ids.reserve(nets.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < nets.size(); ++i) {
        std::string id = nets[i].corpus_id + "_" + to_string(nets[i].mode);
        if (!seen.insert(id).second) id += "_" + std::to_string(i);
        out.ids.push_back(id);
    }
    out.values = DenseMatrix(nets.size());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < nets.size(); ++i)
        for (std::size_t j = i + 1; j < nets.size(); ++j) pairs.emplace_back(i, j);

    std::size_t workers = std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                std::max<std::size_t>(pairs.size(), 1));
    if (workers == 0) workers = 1;
    std::vector<double> results(pairs.size(), 0.0);
    std::vector<std::thread> threads;
    std::atomic<std::size_t> cursor{0};
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            for (std::size_t k = cursor.fetch_add(1); k < pairs.size(); k = cursor.fetch_add(1)) {
                auto [i, j] = pairs[k];
                results[k] = measure_similarity(m, nets[i], nets[j], class_of);
            }
        });
    }
    for (auto& t : threads) t.join();

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        out.values.at(i, j) = results[k];
        out.values.at(j, i) = results[k];
    }
    for (std::size_t i = 0; i < nets.size(); ++i) out.values.at(i, i) = measure_self_value(m);
    return out;
}

std::string matrix_to_csv(const NamedMatrix& m) {
    std::ostringstream out;
    out.precision(17);
    out << "id";
    for (const auto& id : m.ids) out << ',' << id;
    out << '\n';
    for (std::size_t r = 0; r < m.ids.size(); ++r) {
        out << m.ids[r];
        for (std::size_t c = 0; c < m.ids.size(); ++c) out << ',' << m.values.at(r, c);
        out << '\n';
    }
    return out.str();
}

NamedMatrix matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("matrix csv: empty input");
    NamedMatrix m;
    {
        std::istringstream header(line);
        std::string cell;
        std::getline(header, cell, ',');  // corner cell
        while (std::getline(header, cell, ',')) m.ids.push_back(cell);
    }
    m.values = DenseMatrix(m.ids.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= m.ids.size()) throw std::invalid_argument("matrix csv: too many rows");
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');  // row id
        for (std::size_t c = 0; c < m.ids.size(); ++c) {
            if (!std::getline(cells, cell, ','))
                throw std::invalid_argument("matrix csv: short row");
            m.values.at(row, c) = std::stod(cell);
        }
        ++row;
    }
    if (row != m.ids.size()) throw std::invalid_argument("matrix csv: missing rows");
    return m;
}

NamedMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return matrix_from_csv(buffer.str());
}

void save_matrix(const NamedMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << matrix_to_csv(m);
}

}  // namespace topicnet
