#pragma once

// Shared fixtures and independent reference computations for the test
// suites. The oracles here deliberately re-derive results from first
// principles (naive loops, Floyd-Warshall) instead of reusing library code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "topicnet/corpus.hpp"
#include "topicnet/induction.hpp"
#include "topicnet/rng.hpp"
#include "topicnet/scheme.hpp"

namespace testsupport {

using namespace topicnet;

// ---------------------------------------------------------------------------
// Builders

inline TopicNetwork make_network(
    const std::vector<std::pair<std::string, double>>& vertices,
    const std::vector<std::tuple<std::string, std::string, double>>& arcs,
    const std::string& id = "net") {
    std::vector<LabeledDigraph::Vertex> vs;
    for (const auto& [label, weight] : vertices) vs.push_back({label, label, weight});
    std::vector<LabeledDigraph::ArcSpec> as;
    for (const auto& [src, dst, weight] : arcs) as.push_back({src, dst, weight, "topic"});
    TopicNetwork t;
    t.graph = LabeledDigraph(std::move(vs), as);
    t.corpus_id = id;
    return t;
}

// Codes grouped into parent classes, so intra/inter/heter class predicates
// are all realizable.
inline const std::vector<std::string>& label_pool() {
    static const std::vector<std::string> pool = {
        "510", "520", "530", "540", "610", "620", "630", "640",
        "710", "720", "730", "740", "910", "920", "930", "940"};
    return pool;
}

inline std::string pool_class(const std::string& code) { return code.substr(0, 1) + "00"; }

// Random topic network with positive weights. Always contains the 510-520-530
// triangle so every class-sensitive statistic has something to measure.
inline TopicNetwork random_network(Rng& rng, const std::string& id) {
    std::vector<std::string> extras;
    for (const auto& code : label_pool())
        if (code != "510" && code != "520" && code != "530") extras.push_back(code);
    rng.shuffle(extras);
    std::vector<std::string> labels = {"510", "520", "530"};
    std::size_t extra_count = rng.next_index(8);
    labels.insert(labels.end(), extras.begin(), extras.begin() + extra_count);
    std::sort(labels.begin(), labels.end());
    std::size_t n = labels.size();

    std::vector<std::pair<std::string, double>> vertices;
    for (const auto& label : labels) vertices.push_back({label, 0.1 + 5.0 * rng.next_unit()});

    std::set<std::pair<std::size_t, std::size_t>> chosen;
    auto index_of = [&](const std::string& code) {
        return static_cast<std::size_t>(
            std::distance(labels.begin(), std::find(labels.begin(), labels.end(), code)));
    };
    chosen.insert({index_of("510"), index_of("520")});
    chosen.insert({index_of("520"), index_of("530")});
    chosen.insert({index_of("530"), index_of("510")});
    std::size_t arcs_wanted = chosen.size() + rng.next_index(2 * n);
    while (chosen.size() < arcs_wanted)
        chosen.insert({rng.next_index(n), rng.next_index(n)});
    std::vector<std::tuple<std::string, std::string, double>> arcs;
    for (const auto& [s, d] : chosen)
        arcs.emplace_back(labels[s], labels[d], 0.1 + 3.0 * rng.next_unit());
    return make_network(vertices, arcs, id);
}

inline LabeledDigraph random_digraph(Rng& rng) {
    std::size_t n = 2 + rng.next_index(9);
    std::vector<LabeledDigraph::Vertex> vertices;
    for (std::size_t i = 0; i < n; ++i) {
        std::string id = "v" + std::to_string(i);
        vertices.push_back({id, id, 1.0 + rng.next_unit()});
    }
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    std::size_t arcs_wanted = rng.next_index(n * n + 1);
    while (chosen.size() < arcs_wanted)
        chosen.insert({rng.next_index(n), rng.next_index(n)});
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [s, d] : chosen)
        arcs.push_back({"v" + std::to_string(s), "v" + std::to_string(d),
                        0.5 + 2.0 * rng.next_unit(), "link"});
    return LabeledDigraph(std::move(vertices), arcs);
}

// ---------------------------------------------------------------------------
// Worked micro-corpus: four texts, two text links, two author pairs, shared
// vocabulary between the first two texts.

inline CorpusBundle toy_bundle() {
    std::string corpus_json = R"({
      "texts": [
        {"id": "x1", "tokens": ["w1", "w2", "w3"], "links": ["x2"]},
        {"id": "x2", "tokens": ["w1", "w2", "w4"], "links": []},
        {"id": "x3", "tokens": ["w5", "w6", "w7"], "links": ["x4"]},
        {"id": "x4", "tokens": ["w4", "w8", "w9"], "links": []}
      ],
      "revisions": [
        {"text": "x1", "author": "a1", "bytes_added": 1},
        {"text": "x1", "author": "a2", "bytes_added": 1},
        {"text": "x2", "author": "a1", "bytes_added": 1},
        {"text": "x2", "author": "a2", "bytes_added": 1},
        {"text": "x3", "author": "a3", "bytes_added": 1},
        {"text": "x3", "author": "a4", "bytes_added": 1},
        {"text": "x4", "author": "a3", "bytes_added": 1},
        {"text": "x4", "author": "a4", "bytes_added": 1}
      ]
    })";
    return CorpusBundle::from_json(corpus_json, "toy");
}

inline TopicScheme toy_scheme() {
    return TopicScheme::from_json(R"([
      {"code": "500", "label": "Science", "children": [
        {"code": "510", "label": "Mathematics"}]},
      {"code": "600", "label": "Technology", "children": [
        {"code": "620", "label": "Engineering"}]},
      {"code": "900", "label": "History & geography", "children": [
        {"code": "910", "label": "Geography & travel"}]}
    ])");
}

// Lexicon chosen so the four texts classify to exactly one kept topic each:
// x1 -> 510, x2 -> 620, x3 -> 910, x4 -> 910 (its secondary 620 score of 0.5
// falls below the corpus mean of 0.75).
inline LexiconClassifier toy_classifier() {
    return LexiconClassifier::from_tsv("w3\t510\t1\nw4\t620\t1\nw5\t910\t1\nw9\t910\t2\n");
}

// ---------------------------------------------------------------------------
// Independent reference computations

// Membership filtering recomputed from scratch for one text.
inline TopicDistribution oracle_filter(const TopicDistribution& d, std::size_t m_bot,
                                       double mean_value) {
    std::vector<std::pair<std::string, double>> entries(d.begin(), d.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    TopicDistribution kept;
    for (std::size_t i = 0; i < entries.size() && i < m_bot; ++i)
        if (entries[i].second >= mean_value) kept.insert(entries[i]);
    return kept;
}

struct OracleTtn {
    std::map<std::string, double> mu;
    std::map<std::pair<std::string, std::string>, double> nu;
};

// Naive double-loop recomputation of the text topic network weights.
inline OracleTtn oracle_ttn(const Corpus& corpus, const Classifier& classifier,
                            const TopicScheme& scheme, int level, std::size_t m_bot) {
    std::map<std::string, TopicDistribution> raw;
    for (const auto& text : corpus.texts) {
        TopicDistribution d = classifier.classify(text.tokens);
        TopicDistribution projected;
        for (const auto& [code, score] : d) {
            if (scheme.node(code).level < level) continue;
            std::string target = scheme.ancestor_at(code, level);
            auto it = projected.find(target);
            if (it == projected.end())
                projected[target] = score;
            else
                it->second = std::max(it->second, score);
        }
        raw[text.id] = projected;
    }
    std::set<double> values;
    for (const auto& [id, d] : raw)
        for (const auto& [code, score] : d)
            if (score > 0.0) values.insert(score);
    double mean_value = 0.0;
    if (!values.empty()) {
        for (double v : values) mean_value += v;
        mean_value /= static_cast<double>(values.size());
    }

    std::map<std::string, TopicDistribution> kept;
    for (const auto& [id, d] : raw) kept[id] = oracle_filter(d, m_bot, mean_value);

    OracleTtn out;
    for (const auto& text : corpus.texts)
        for (const auto& [code, score] : kept[text.id]) out.mu[code] += score;
    for (const auto& text : corpus.texts)
        for (const auto& link : text.links)
            for (const auto& [v, sv] : kept[text.id])
                for (const auto& [w, sw] : kept[link]) out.nu[{v, w}] += sv * sw;
    return out;
}

// Geodesic-profile cosine similarity recomputed from scratch: explicit label
// alignment, Floyd-Warshall distances, direct formula evaluation.
inline double oracle_cos(const TopicNetwork& g1, const TopicNetwork& g2, bool weighted,
                         bool degree_phi, bool vertex_part) {
    std::set<std::string> label_set;
    for (const auto& v : g1.graph.vertices()) label_set.insert(v.label);
    for (const auto& v : g2.graph.vertices()) label_set.insert(v.label);
    std::vector<std::string> labels(label_set.begin(), label_set.end());
    std::size_t n = labels.size();
    auto index_of = [&](const std::string& label) {
        return std::distance(labels.begin(), std::find(labels.begin(), labels.end(), label));
    };

    auto distances = [&](const TopicNetwork& g) {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
        for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
        double max_w = 0.0;
        for (const auto& a : g.graph.arcs()) max_w = std::max(max_w, a.weight);
        for (const auto& a : g.graph.arcs()) {
            std::size_t s = index_of(g.graph.vertex(a.src).label);
            std::size_t t = index_of(g.graph.vertex(a.dst).label);
            double len = weighted ? max_w / a.weight : 1.0;
            d[s][t] = std::min(d[s][t], len);
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        return d;
    };

    auto proximities = [&](const TopicNetwork& g) {
        auto d = distances(g);
        std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            bool in_i = g.graph.find_label(labels[i]).has_value();
            for (std::size_t j = 0; j < n; ++j) {
                bool in_j = g.graph.find_label(labels[j]).has_value();
                if (!in_i || !in_j) continue;
                double dist = d[i][j];
                if (!(dist <= static_cast<double>(n))) dist = static_cast<double>(n);
                p[i][j] = 1.0 - dist / static_cast<double>(n);
            }
        }
        return p;
    };

    auto p1 = proximities(g1);
    auto p2 = proximities(g2);

    auto degree = [&](const TopicNetwork& g, const std::string& label) {
        std::size_t deg = 0;
        for (const auto& a : g.graph.arcs()) {
            if (g.graph.vertex(a.src).label == label) ++deg;
            if (g.graph.vertex(a.dst).label == label) ++deg;
        }
        return deg;
    };

    double weighted_sum = 0.0, phi_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0, n1 = 0.0, n2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            dot += p1[i][k] * p2[i][k];
            n1 += p1[i][k] * p1[i][k];
            n2 += p2[i][k] * p2[i][k];
        }
        double c = (n1 > 0.0 && n2 > 0.0) ? dot / (std::sqrt(n1) * std::sqrt(n2)) : 0.0;
        double phi = 1.0;
        if (degree_phi)
            phi = static_cast<double>(std::max(degree(g1, labels[i]), degree(g2, labels[i])));
        weighted_sum += phi * c;
        phi_sum += phi;
    }
    double arc_part = phi_sum > 0.0 ? weighted_sum / phi_sum : 0.0;
    if (!vertex_part) return arc_part;

    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto v1 = g1.graph.find_label(labels[i]);
        auto v2 = g2.graph.find_label(labels[i]);
        double m1 = v1 ? g1.graph.vertex(*v1).weight : 0.0;
        double m2 = v2 ? g2.graph.vertex(*v2).weight : 0.0;
        dot += m1 * m2;
        n1 += m1 * m1;
        n2 += m2 * m2;
    }
    double vertex_cos = (n1 > 0.0 && n2 > 0.0) ? dot / (std::sqrt(n1) * std::sqrt(n2)) : 0.0;
    return 0.5 * (vertex_cos + arc_part);
}

// ---------------------------------------------------------------------------
// Calibration corpus: every text shares the same authors, every author has
// the same activity everywhere, so all co-author weights coincide.

struct CalibrationFixture {
    CorpusBundle bundle;
    ReferenceStats reference;
};

inline CalibrationFixture calibration_fixture(std::size_t n_texts = 20, std::size_t n_authors = 4,
                                              double activity = 7.0) {
    std::string texts = "[";
    Rng rng(777);
    const auto& pool = label_pool();
    for (std::size_t i = 0; i < n_texts; ++i) {
        std::string id = (i < 10 ? "t0" : "t") + std::to_string(i);
        std::string token = "tok_" + pool[i % pool.size()];
        std::size_t link_target = rng.next_index(n_texts);
        std::string link_id =
            (link_target < 10 ? "t0" : "t") + std::to_string(link_target);
        if (i > 0) texts += ",";
        texts += "{\"id\":\"" + id + "\",\"tokens\":[\"" + token + "\"],\"links\":[\"" +
                 link_id + "\"]}";
    }
    texts += "]";
    std::string revisions = "[";
    bool first = true;
    for (std::size_t i = 0; i < n_texts; ++i) {
        std::string id = (i < 10 ? "t0" : "t") + std::to_string(i);
        for (std::size_t a = 0; a < n_authors; ++a) {
            if (!first) revisions += ",";
            first = false;
            revisions += "{\"text\":\"" + id + "\",\"author\":\"author" + std::to_string(a) +
                         "\",\"bytes_added\":" + std::to_string(activity) + "}";
        }
    }
    revisions += "]";

    CalibrationFixture fixture;
    fixture.bundle = CorpusBundle::from_json(
        "{\"texts\":" + texts + ",\"revisions\":" + revisions + "}", "calibration");
    fixture.reference.mean_activity = activity;
    fixture.reference.mean_author_count = static_cast<double>(n_authors);
    // Every ordered author pair co-works on every text with equal shares.
    fixture.reference.mean_coauthorship =
        2.0 * static_cast<double>(n_texts) / static_cast<double>(n_authors);
    return fixture;
}

// Lexicon covering the calibration (and synthetic) token space: token
// "tok_<code>" maps to <code> with unit weight.
inline LexiconClassifier pool_classifier() {
    std::string tsv;
    for (const auto& code : label_pool()) tsv += "tok_" + code + "\t" + code + "\t1\n";
    return LexiconClassifier::from_tsv(tsv);
}

inline TopicScheme pool_scheme() {
    return TopicScheme::from_json(R"([
      {"code": "500", "label": "Science", "children": [
        {"code": "510"}, {"code": "520"}, {"code": "530"}, {"code": "540"}]},
      {"code": "600", "label": "Technology", "children": [
        {"code": "610"}, {"code": "620"}, {"code": "630"}, {"code": "640"}]},
      {"code": "700", "label": "Arts", "children": [
        {"code": "710"}, {"code": "720"}, {"code": "730"}, {"code": "740"}]},
      {"code": "900", "label": "History", "children": [
        {"code": "910"}, {"code": "920"}, {"code": "930"}, {"code": "940"}]}
    ])");
}

// ---------------------------------------------------------------------------
// Synthetic genre study: genres share the topic vocabulary and text volume
// but differ in which topic pairs their hyperlinks realize.

struct SyntheticStudy {
    std::vector<CorpusBundle> bundles;        // 3 genres x per_genre corpora
    std::vector<std::string> genre_of;        // parallel to bundles
};

inline SyntheticStudy synthetic_study(std::size_t per_genre = 10, std::uint64_t seed = 4242) {
    const std::vector<std::string> topics = {"510", "520", "530", "540", "610", "620",
                                             "630", "640", "710", "720", "730", "740"};
    // Offset sets defining each genre's topic adjacency; equal arc counts
    // keep the rewired baselines density-matched.
    const std::vector<std::vector<std::size_t>> genre_offsets = {{1, 2}, {3, 5}, {4, 6}};

    SyntheticStudy study;
    Rng rng(seed);
    for (std::size_t genre = 0; genre < genre_offsets.size(); ++genre) {
        for (std::size_t c = 0; c < per_genre; ++c) {
            std::string corpus_id = "g" + std::to_string(genre) + "c" + std::to_string(c);
            std::size_t n_topics = topics.size();

            // Three to five texts per topic.
            std::vector<std::pair<std::string, std::size_t>> texts;  // (text id, topic index)
            std::vector<std::vector<std::size_t>> texts_of_topic(n_topics);
            for (std::size_t t = 0; t < n_topics; ++t) {
                std::size_t count = 3 + rng.next_index(3);
                for (std::size_t k = 0; k < count; ++k) {
                    texts_of_topic[t].push_back(texts.size());
                    std::string id = "d" + std::to_string(100 + texts.size());
                    texts.emplace_back(id, t);
                }
            }

            std::vector<std::set<std::size_t>> links(texts.size());
            for (std::size_t t = 0; t < n_topics; ++t) {
                for (std::size_t offset : genre_offsets[genre]) {
                    std::size_t u = (t + offset) % n_topics;
                    for (std::size_t k = 0; k < 3; ++k) {
                        std::size_t src =
                            texts_of_topic[t][rng.next_index(texts_of_topic[t].size())];
                        std::size_t dst =
                            texts_of_topic[u][rng.next_index(texts_of_topic[u].size())];
                        links[src].insert(dst);
                    }
                }
            }
            for (std::size_t k = 0; k < 3; ++k)
                links[rng.next_index(texts.size())].insert(rng.next_index(texts.size()));

            std::string json_texts = "[";
            for (std::size_t i = 0; i < texts.size(); ++i) {
                if (i > 0) json_texts += ",";
                json_texts += "{\"id\":\"" + texts[i].first + "\",\"tokens\":[\"tok_" +
                              topics[texts[i].second] + "\"],\"links\":[";
                bool first = true;
                for (std::size_t dst : links[i]) {
                    if (!first) json_texts += ",";
                    first = false;
                    json_texts += "\"" + texts[dst].first + "\"";
                }
                json_texts += "]}";
            }
            json_texts += "]";
            study.bundles.push_back(CorpusBundle::from_json(
                "{\"texts\":" + json_texts + ",\"revisions\":[]}", corpus_id));
            study.genre_of.push_back("genre" + std::to_string(genre));
        }
    }
    return study;
}

}  // namespace testsupport
