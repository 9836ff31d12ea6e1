#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "topicnet/graph.hpp"
#include "topicnet/induction.hpp"

namespace topicnet {

// Fixed registry of the pairwise network comparison measures. Indices 0..8
// are similarities in [0, 1]; netsimile is a distance in [0, inf); tosi is a
// cosine.
enum class MeasureId {
    kGes = 0,
    kWal,
    kVeo,
    kWges,
    kCosAWeighted,          // arc-side cosine, weighted geodesics, uniform phi
    kCosAvWeighted,         // vertex+arc cosine, weighted geodesics, uniform phi
    kCosAvWeightedDegree,   // vertex+arc cosine, weighted geodesics, degree phi
    kCosAUnweighted,        // arc-side cosine, hop geodesics, uniform phi
    kCosAvUnweighted,       // vertex+arc cosine, hop geodesics, uniform phi
    kNetsimile,
    kTosi,
};

inline constexpr std::size_t kMeasureCount = 11;

const std::vector<MeasureId>& all_measures();
std::string to_string(MeasureId m);
MeasureId measure_from_string(const std::string& name);
bool measure_is_distance(MeasureId m);
double measure_self_value(MeasureId m);
// Value range used by randomized reference matrices.
std::pair<double, double> measure_range(MeasureId m);

// Label-based edit distance: vertices and arcs present in only one of the
// graphs, counted over label (pairs).
double ged(const TopicNetwork& g1, const TopicNetwork& g2);

// Edit distance turned into a similarity with vertex and arc overlaps
// equally weighted. Empty arc sets on both sides count as perfect agreement.
double ges(const TopicNetwork& g1, const TopicNetwork& g2);

// Shared elements over non-shared-plus-shared elements.
double wal(const TopicNetwork& g1, const TopicNetwork& g2);

// Vertex/edge overlap; equals 1 - ged / (|V1|+|V2|+|A1|+|A2|).
double veo(const TopicNetwork& g1, const TopicNetwork& g2);

// Weight-sensitive edit similarity: label-matched vertices and arcs score
// 1 - |w1-w2| / max(w1, w2), unmatched elements score nothing.
double wges(const TopicNetwork& g1, const TopicNetwork& g2);

enum class PhiMode { kUniform, kMaxDegree };

struct CosineOptions {
    bool weighted = true;
    PhiMode phi = PhiMode::kUniform;
    bool include_vertex_part = true;
    double distance_cap = std::numeric_limits<double>::infinity();
    // Optional label filter for the arc-side mean; empty means all labels.
    std::vector<std::string> label_filter;
};

// Vertex sets of the two graphs padded to a common label set; padded
// vertices carry zero weight and no arcs.
struct AlignedPair {
    std::vector<std::string> labels;  // sorted union
    std::vector<char> in_first;       // label present in g1
    std::vector<char> in_second;
    std::vector<double> mu_first;     // 0 on padded positions
    std::vector<double> mu_second;
    std::vector<std::size_t> degree_first;  // total degree, 0 on padded positions
    std::vector<std::size_t> degree_second;
    DenseMatrix proximity_first;   // geodetic proximity within the first graph
    DenseMatrix proximity_second;
};

AlignedPair align(const TopicNetwork& g1, const TopicNetwork& g2, bool weighted,
                  double distance_cap = std::numeric_limits<double>::infinity());

// Geodesic-profile cosine similarity. Per shared label, the cosine of the two
// proximity vectors; their phi-weighted mean is the arc part, optionally
// averaged with the cosine of the label-aligned vertex weight vectors.
double cos_graph(const TopicNetwork& g1, const TopicNetwork& g2, const CosineOptions& options);

// Canberra distance of the two 35-dimensional structural feature vectors.
double netsimile_distance(const TopicNetwork& g1, const TopicNetwork& g2);

using ClassResolver = std::function<std::string(const std::string& label)>;

// Cosine of the class-sensitive clustering vectors. The resolver maps each
// vertex label to its class code; by default every label is its own class.
double tosi(const TopicNetwork& g1, const TopicNetwork& g2,
            const ClassResolver& class_of = nullptr);

double measure_similarity(MeasureId m, const TopicNetwork& g1, const TopicNetwork& g2,
                          const ClassResolver& class_of = nullptr);

struct NamedMatrix {
    std::vector<std::string> ids;
    DenseMatrix values;
};

// Symmetric pairwise matrix over the given networks; the diagonal carries the
// measure's self value. Pairs are evaluated concurrently.
NamedMatrix similarity_matrix(const std::vector<TopicNetwork>& nets, MeasureId m,
                              const ClassResolver& class_of = nullptr);

std::string matrix_to_csv(const NamedMatrix& m);
NamedMatrix matrix_from_csv(const std::string& text);
NamedMatrix load_matrix(const std::string& path);
void save_matrix(const NamedMatrix& m, const std::string& path);

}  // namespace topicnet
