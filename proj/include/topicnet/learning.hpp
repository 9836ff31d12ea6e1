#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topicnet/induction.hpp"
#include "topicnet/similarity.hpp"

namespace topicnet {

// Reference assignment of items to target classes.
struct GoldStandard {
    std::vector<std::string> items;              // sorted
    std::map<std::string, std::string> class_of; // item -> class label

    static GoldStandard from_tsv(const std::string& text);
    static GoldStandard load(const std::string& path);

    std::vector<std::string> class_labels() const;  // sorted, distinct
    void validate() const;                          // >= 2 classes, every item labeled
};

// Items described by feature columns. Similarity-derived matrices are square
// with feature ids equal to item ids; the general shape is rectangular.
struct FeatureMatrix {
    std::vector<std::string> items;
    std::vector<std::string> features;
    std::vector<double> data;  // row-major, items x features

    double at(std::size_t item, std::size_t feature) const {
        return data[item * features.size() + feature];
    }
    double& at(std::size_t item, std::size_t feature) {
        return data[item * features.size() + feature];
    }

    static FeatureMatrix from_named(const NamedMatrix& m);
    NamedMatrix to_named() const;  // square matrices only
};

using FeatureMask = std::vector<std::uint8_t>;

std::size_t mask_popcount(const FeatureMask& mask);

struct ClassScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    std::map<std::string, ClassScore> per_class;
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (gold, predicted)
    double macro_f = 0.0;

    std::string to_json() const;
};

// Leave-one-out evaluation with a 3-nearest-neighbor vote over cosine
// distances on the masked feature columns. The held-out item's own feature
// column is excluded from the comparison. Neighbors vote with their cosine
// similarity, so maximally distant neighbors carry no weight. Vote ties fall
// back to the nearest neighbor of a tied class, then to class-label order.
// Deterministic.
EvalReport classify_loo(const FeatureMatrix& m, const GoldStandard& gold,
                        const FeatureMask& mask);

EvalReport classify_loo_all_features(const FeatureMatrix& m, const GoldStandard& gold);

struct GeneticConfig {
    std::size_t population = 20;
    std::size_t rounds = 50;            // 500 for the extended search
    double mutation_rate = 0.05;        // per-bit flip probability
    std::uint64_t seed = 1;
    bool minimize = false;              // append the bit-clearing pass
    std::size_t minimize_rounds = 500;
};

struct GeneticResult {
    FeatureMask mask;
    EvalReport report;
    std::vector<double> best_fitness_per_round;  // non-decreasing
};

// Feature-subset search: per round the top quarter of the population is kept
// unchanged, a mutated copy of each elite is added, the middle is mutated in
// place and the worst quarter is replaced by fresh random masks. Fitness is
// the macro F-score of classify_loo. With minimize set, a greedy pass then
// clears one set bit at a time, keeping the clear only when fitness does not
// drop. Returns the best mask ever seen.
GeneticResult genetic_search(const FeatureMatrix& m, const GoldStandard& gold,
                             const GeneticConfig& cfg);

struct BaselineResult {
    std::vector<double> scores;
    double mean = 0.0;
    double sd = 0.0;
};

// Random assignment baseline: items are shuffled onto the gold classes
// keeping the true class cardinalities; reports the mean macro F-score.
BaselineResult baseline_b1(const GoldStandard& gold, std::size_t iterations = 100000,
                           std::uint64_t seed = 1);

enum class BaselineClassify { kAllFeatures, kGeneticSearch };

// Degree-free randomization baseline: every network is rewired, the
// similarity matrix is rebuilt and classified per repetition.
BaselineResult baseline_b2(const std::vector<TopicNetwork>& nets, MeasureId m,
                           const GoldStandard& gold, std::size_t reps = 100,
                           std::uint64_t seed = 1,
                           BaselineClassify mode = BaselineClassify::kAllFeatures,
                           const GeneticConfig* genetic = nullptr,
                           const ClassResolver& class_of = nullptr);

// Random-matrix baseline: symmetric matrices with the measure's self value on
// the diagonal and entries drawn uniformly from the given range.
BaselineResult baseline_b3(const GoldStandard& gold, std::pair<double, double> value_range,
                           double self_value = 1.0, std::size_t reps = 100,
                           std::uint64_t seed = 1,
                           BaselineClassify mode = BaselineClassify::kAllFeatures,
                           const GeneticConfig* genetic = nullptr);

// Random-class baseline: items are reassigned to the gold class labels with
// randomized non-empty cardinalities; the gold assignment itself is never
// drawn. Classification runs against the random classes.
BaselineResult baseline_b4(const FeatureMatrix& m, const GoldStandard& gold,
                           std::size_t n_classes, std::size_t reps = 100,
                           std::uint64_t seed = 1,
                           BaselineClassify mode = BaselineClassify::kAllFeatures,
                           const GeneticConfig* genetic = nullptr);

}  // namespace topicnet
