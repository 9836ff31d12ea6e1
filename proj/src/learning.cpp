#include "topicnet/learning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "topicnet/rng.hpp"
#include "topicnet/stats.hpp"

namespace topicnet {

using nlohmann::json;

GoldStandard GoldStandard::from_tsv(const std::string& text) {
    GoldStandard gold;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::invalid_argument("gold standard: bad row " + std::to_string(lineno));
        std::string id = line.substr(0, tab);
        std::string cls = line.substr(tab + 1);
        if (!cls.empty() && cls.back() == '\r') cls.pop_back();
        if (!gold.class_of.emplace(id, cls).second)
            throw std::invalid_argument("gold standard: duplicate item " + id);
        gold.items.push_back(id);
    }
    std::sort(gold.items.begin(), gold.items.end());
    gold.validate();
    return gold;
}

GoldStandard GoldStandard::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gold standard file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_tsv(buffer.str());
}

std::vector<std::string> GoldStandard::class_labels() const {
    std::set<std::string> labels;
    for (const auto& [item, cls] : class_of) labels.insert(cls);
    return {labels.begin(), labels.end()};
}

void GoldStandard::validate() const {
    if (items.size() < 2) throw std::invalid_argument("gold standard: need >= 2 items");
    for (const auto& item : items)
        if (class_of.count(item) == 0)
            throw std::invalid_argument("gold standard: unlabeled item " + item);
    if (class_labels().size() < 2)
        throw std::invalid_argument("gold standard: need >= 2 classes");
}

FeatureMatrix FeatureMatrix::from_named(const NamedMatrix& m) {
    FeatureMatrix out;
    out.items = m.ids;
    out.features = m.ids;
    out.data = m.values.data;
    return out;
}

NamedMatrix FeatureMatrix::to_named() const {
    if (items != features)
        throw std::invalid_argument("to_named: matrix is not square over item ids");
    NamedMatrix out;
    out.ids = items;
    out.values = DenseMatrix(items.size());
    out.values.data = data;
    return out;
}

std::size_t mask_popcount(const FeatureMask& mask) {
    std::size_t count = 0;
    for (auto bit : mask) count += bit ? 1 : 0;
    return count;
}

std::string EvalReport::to_json() const {
    json per;
    for (const auto& [cls, score] : per_class)
        per[cls] = {{"precision", score.precision}, {"recall", score.recall}, {"f1", score.f1}};
    json conf = json::array();
    for (const auto& [pair, count] : confusion)
        conf.push_back({{"gold", pair.first}, {"predicted", pair.second}, {"count", count}});
    return json{{"macro_f", macro_f}, {"classes", per}, {"confusion", conf}}.dump(2);
}

namespace {

EvalReport score_predictions(const std::vector<std::string>& items,
                             const std::map<std::string, std::string>& gold,
                             const std::vector<std::string>& predicted) {
    EvalReport report;
    std::set<std::string> labels;
    for (const auto& item : items) labels.insert(gold.at(item));

    for (std::size_t i = 0; i < items.size(); ++i)
        ++report.confusion[{gold.at(items[i]), predicted[i]}];

    double f_sum = 0.0;
    for (const auto& cls : labels) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            bool is_gold = gold.at(items[i]) == cls;
            bool is_pred = predicted[i] == cls;
            if (is_gold && is_pred) ++tp;
            if (!is_gold && is_pred) ++fp;
            if (is_gold && !is_pred) ++fn;
        }
        ClassScore score;
        score.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        score.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        score.f1 = (score.precision + score.recall) > 0.0
                       ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                       : 0.0;
        report.per_class[cls] = score;
        f_sum += score.f1;
    }
    report.macro_f = labels.empty() ? 0.0 : f_sum / static_cast<double>(labels.size());
    return report;
}

// Cosine distance between two items over the masked columns, skipping the
// excluded column index (or none when SIZE_MAX).
double masked_cosine_distance(const FeatureMatrix& m, std::size_t a, std::size_t b,
                              const FeatureMask& mask, std::size_t excluded) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t f = 0; f < m.features.size(); ++f) {
        if (!mask[f] || f == excluded) continue;
        double x = m.at(a, f);
        double y = m.at(b, f);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na <= 0.0 || nb <= 0.0) return 1.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> knn_predictions(const FeatureMatrix& m,
                                         const std::map<std::string, std::string>& class_of,
                                         const FeatureMask& mask) {
    std::size_t n = m.items.size();
    std::vector<std::string> predictions(n);

    // Feature column carrying the item itself, if any.
    std::vector<std::size_t> own_column(n, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < m.features.size(); ++f) {
            if (m.features[f] == m.items[i]) {
                own_column[i] = f;
                break;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> neighbors;
        neighbors.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            neighbors.emplace_back(masked_cosine_distance(m, i, j, mask, own_column[i]), j);
        }
        std::sort(neighbors.begin(), neighbors.end());
        std::size_t k = std::min<std::size_t>(3, neighbors.size());

        // Each neighbor votes with its cosine similarity, so a single
        // strongly similar neighbor outweighs maximally distant ties.
        std::map<std::string, double> votes;
        for (std::size_t r = 0; r < k; ++r)
            votes[class_of.at(m.items[neighbors[r].second])] += 1.0 - neighbors[r].first;
        double best = 0.0;
        for (const auto& [cls, weight] : votes) best = std::max(best, weight);
        std::set<std::string> tied;
        for (const auto& [cls, weight] : votes)
            if (weight == best) tied.insert(cls);
        if (tied.size() == 1) {
            predictions[i] = *tied.begin();
        } else {
            std::string pick;
            for (std::size_t r = 0; r < k && pick.empty(); ++r) {
                const std::string& cls = class_of.at(m.items[neighbors[r].second]);
                if (tied.count(cls)) pick = cls;
            }
            predictions[i] = pick.empty() ? *tied.begin() : pick;
        }
    }
    return predictions;
}

}  // namespace

EvalReport classify_loo(const FeatureMatrix& m, const GoldStandard& gold,
                        const FeatureMask& mask) {
    if (m.items.size() < 2) throw std::invalid_argument("classify_loo: need >= 2 items");
    if (mask.size() != m.features.size())
        throw std::invalid_argument("classify_loo: mask size mismatch");
    if (mask_popcount(mask) == 0)
        throw std::invalid_argument("classify_loo: mask selects no features");
    for (const auto& item : m.items)
        if (gold.class_of.count(item) == 0)
            throw std::invalid_argument("classify_loo: item missing from gold standard: " + item);

    auto predictions = knn_predictions(m, gold.class_of, mask);
    return score_predictions(m.items, gold.class_of, predictions);
}

EvalReport classify_loo_all_features(const FeatureMatrix& m, const GoldStandard& gold) {
    return classify_loo(m, gold, FeatureMask(m.features.size(), 1));
}

namespace {

FeatureMask random_mask(std::size_t size, Rng& rng) {
    FeatureMask mask(size, 0);
    for (auto& bit : mask) bit = rng.next_unit() < 0.5 ? 1 : 0;
    if (mask_popcount(mask) == 0) mask[rng.next_index(size)] = 1;
    return mask;
}

void mutate(FeatureMask& mask, double rate, Rng& rng) {
    for (auto& bit : mask)
        if (rng.next_unit() < rate) bit = bit ? 0 : 1;
    if (mask_popcount(mask) == 0) mask[rng.next_index(mask.size())] = 1;
}

}  // namespace

GeneticResult genetic_search(const FeatureMatrix& m, const GoldStandard& gold,
                             const GeneticConfig& cfg) {
    if (cfg.population < 2) throw std::invalid_argument("genetic_search: population must be >= 2");
    if (cfg.rounds < 1) throw std::invalid_argument("genetic_search: rounds must be >= 1");
    std::size_t width = m.features.size();
    Rng rng(cfg.seed);

    std::map<FeatureMask, double> fitness_cache;
    auto fitness = [&](const FeatureMask& mask) {
        auto it = fitness_cache.find(mask);
        if (it != fitness_cache.end()) return it->second;
        double f = classify_loo(m, gold, mask).macro_f;
        fitness_cache.emplace(mask, f);
        return f;
    };

    std::vector<FeatureMask> population;
    population.push_back(FeatureMask(width, 1));  // full mask as a stable anchor
    while (population.size() < cfg.population) population.push_back(random_mask(width, rng));

    FeatureMask best_mask = population.front();
    double best_fitness = fitness(best_mask);
    GeneticResult result;

    auto consider = [&](const FeatureMask& mask, double f) {
        if (f > best_fitness ||
            (f == best_fitness && mask_popcount(mask) < mask_popcount(best_mask)) ||
            (f == best_fitness && mask_popcount(mask) == mask_popcount(best_mask) &&
             mask < best_mask)) {
            best_fitness = f;
            best_mask = mask;
        }
    };

    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        std::vector<std::pair<double, FeatureMask>> scored;
        scored.reserve(population.size());
        for (const auto& mask : population) {
            double f = fitness(mask);
            consider(mask, f);
            scored.emplace_back(f, mask);
        }
        std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        result.best_fitness_per_round.push_back(best_fitness);

        std::size_t elite = std::max<std::size_t>(1, cfg.population / 4);
        std::size_t fresh = std::max<std::size_t>(1, cfg.population / 4);
        std::vector<FeatureMask> next;
        next.reserve(cfg.population);
        for (std::size_t i = 0; i < elite && i < scored.size(); ++i)
            next.push_back(scored[i].second);
        for (std::size_t i = 0; i < elite && next.size() < cfg.population; ++i) {
            FeatureMask copy = scored[i].second;
            mutate(copy, cfg.mutation_rate, rng);
            next.push_back(std::move(copy));
        }
        for (std::size_t i = elite; next.size() + fresh < cfg.population && i < scored.size();
             ++i) {
            FeatureMask copy = scored[i].second;
            mutate(copy, cfg.mutation_rate, rng);
            next.push_back(std::move(copy));
        }
        while (next.size() < cfg.population) next.push_back(random_mask(width, rng));
        population = std::move(next);
    }
    for (const auto& mask : population) consider(mask, fitness(mask));

    if (cfg.minimize) {
        FeatureMask current = best_mask;
        double current_fitness = best_fitness;
        for (std::size_t round = 0; round < cfg.minimize_rounds; ++round) {
            std::vector<std::size_t> set_bits;
            for (std::size_t f = 0; f < width; ++f)
                if (current[f]) set_bits.push_back(f);
            if (set_bits.size() <= 1) break;
            std::size_t target = set_bits[rng.next_index(set_bits.size())];
            FeatureMask trial = current;
            trial[target] = 0;
            double f = fitness(trial);
            if (f >= current_fitness) {
                current = std::move(trial);
                current_fitness = f;
            }
        }
        best_mask = current;
        best_fitness = current_fitness;
    }

    result.mask = best_mask;
    result.report = classify_loo(m, gold, best_mask);
    return result;
}

namespace {

BaselineResult summarize(std::vector<double> scores) {
    BaselineResult r;
    r.mean = mean(scores);
    r.sd = population_sd(scores);
    r.scores = std::move(scores);
    return r;
}

}  // namespace

BaselineResult baseline_b1(const GoldStandard& gold, std::size_t iterations, std::uint64_t seed) {
    if (iterations < 1) throw std::invalid_argument("baseline_b1: iterations must be >= 1");
    if (gold.items.empty()) throw std::invalid_argument("baseline_b1: empty gold standard");
    Rng rng(seed);
    std::vector<std::string> labels;
    labels.reserve(gold.items.size());
    for (const auto& item : gold.items) labels.push_back(gold.class_of.at(item));

    std::vector<double> scores;
    scores.reserve(iterations);
    std::vector<std::string> shuffled = labels;
    for (std::size_t it = 0; it < iterations; ++it) {
        rng.shuffle(shuffled);
        scores.push_back(score_predictions(gold.items, gold.class_of, shuffled).macro_f);
    }
    return summarize(std::move(scores));
}

namespace {

double classify_for_baseline(const FeatureMatrix& m, const GoldStandard& gold,
                             BaselineClassify mode, const GeneticConfig* genetic,
                             std::uint64_t seed) {
    if (mode == BaselineClassify::kAllFeatures)
        return classify_loo_all_features(m, gold).macro_f;
    GeneticConfig cfg = genetic ? *genetic : GeneticConfig{};
    cfg.seed = seed;
    return genetic_search(m, gold, cfg).report.macro_f;
}

}  // namespace

BaselineResult baseline_b2(const std::vector<TopicNetwork>& nets, MeasureId m,
                           const GoldStandard& gold, std::size_t reps, std::uint64_t seed,
                           BaselineClassify mode, const GeneticConfig* genetic,
                           const ClassResolver& class_of) {
    if (reps < 1) throw std::invalid_argument("baseline_b2: reps must be >= 1");
    Rng rng(seed);
    std::vector<double> scores;
    scores.reserve(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::vector<TopicNetwork> rewired;
        rewired.reserve(nets.size());
        for (const auto& net : nets) {
            TopicNetwork rw = net;
            rw.graph = er_rewire(net.graph, rng.next_u64());
            rewired.push_back(std::move(rw));
        }
        NamedMatrix sim = similarity_matrix(rewired, m, class_of);
        FeatureMatrix features = FeatureMatrix::from_named(sim);
        scores.push_back(classify_for_baseline(features, gold, mode, genetic, rng.next_u64()));
    }
    return summarize(std::move(scores));
}

BaselineResult baseline_b3(const GoldStandard& gold, std::pair<double, double> value_range,
                           double self_value, std::size_t reps, std::uint64_t seed,
                           BaselineClassify mode, const GeneticConfig* genetic) {
    if (reps < 1) throw std::invalid_argument("baseline_b3: reps must be >= 1");
    gold.validate();
    Rng rng(seed);
    std::size_t n = gold.items.size();
    std::vector<double> scores;
    scores.reserve(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        FeatureMatrix m;
        m.items = gold.items;
        m.features = gold.items;
        m.data.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            m.at(i, i) = self_value;
            for (std::size_t j = i + 1; j < n; ++j) {
                double v = rng.next_range(value_range.first, value_range.second);
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        }
        scores.push_back(classify_for_baseline(m, gold, mode, genetic, rng.next_u64()));
    }
    return summarize(std::move(scores));
}

BaselineResult baseline_b4(const FeatureMatrix& m, const GoldStandard& gold,
                           std::size_t n_classes, std::size_t reps, std::uint64_t seed,
                           BaselineClassify mode, const GeneticConfig* genetic) {
    if (reps < 1) throw std::invalid_argument("baseline_b4: reps must be >= 1");
    gold.validate();
    std::size_t n = m.items.size();
    if (n_classes > n) throw std::invalid_argument("baseline_b4: more classes than items");
    if (n_classes < 2) throw std::invalid_argument("baseline_b4: need >= 2 classes");

    std::vector<std::string> labels = gold.class_labels();
    if (labels.size() < n_classes)
        throw std::invalid_argument("baseline_b4: gold standard has fewer classes");
    labels.resize(n_classes);

    Rng rng(seed);
    std::vector<double> scores;
    scores.reserve(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        GoldStandard random_gold;
        random_gold.items = m.items;
        bool equals_gold = true;
        do {
            // Random composition: cardinalities from uniformly chosen cut
            // points, then a random item order into the slots.
            std::vector<std::size_t> cuts;
            std::set<std::size_t> cut_set;
            while (cut_set.size() < n_classes - 1) cut_set.insert(1 + rng.next_index(n - 1));
            cuts.assign(cut_set.begin(), cut_set.end());
            cuts.push_back(n);

            std::vector<std::string> order = m.items;
            rng.shuffle(order);
            random_gold.class_of.clear();
            std::size_t start = 0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                for (std::size_t i = start; i < cuts[c]; ++i)
                    random_gold.class_of[order[i]] = labels[c];
                start = cuts[c];
            }
            equals_gold = random_gold.class_of == gold.class_of;
        } while (equals_gold);
        scores.push_back(classify_for_baseline(m, random_gold, mode, genetic, rng.next_u64()));
    }
    return summarize(std::move(scores));
}

}  // namespace topicnet
