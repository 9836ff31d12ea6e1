#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicnet/corpus.hpp"
#include "topicnet/graph.hpp"
#include "topicnet/scheme.hpp"

namespace topicnet {

// Everything needed to derive topic networks from a corpus: the topic scheme,
// the text classifier and the two-layer network over the corpus.
struct DefinitionalSetting {
    const TopicScheme* scheme = nullptr;
    const Classifier* classifier = nullptr;
    const Corpus* corpus = nullptr;
    const EditHistory* history = nullptr;
};

struct InductionConfig {
    std::size_t m_bot = 5;   // membership values kept per text
    double p = 2.0;          // activity reward/penalty factor, must be > 1
    int level = 2;           // scheme level the topics are projected to
    ReferenceStats reference;
};

enum class TopicNetworkMode { kTtn, kAtn, kWtn, kGeneric };

std::string to_string(TopicNetworkMode mode);
TopicNetworkMode topic_network_mode_from_string(const std::string& name);

// Topic-labeled graph: vertex ids and labels are topic codes, all weights
// strictly positive.
struct TopicNetwork {
    LabeledDigraph graph;
    TopicNetworkMode mode = TopicNetworkMode::kGeneric;
    bool undirected = false;
    std::string corpus_id;
    std::string config_digest;
};

std::string topic_network_to_json(const TopicNetwork& t);
TopicNetwork topic_network_from_json(const std::string& text);
TopicNetwork load_topic_network(const std::string& path);
void save_topic_network(const TopicNetwork& t, const std::string& path);

// Per-text classification projected to the configured level and reduced to
// the values worth keeping. Texts stay in id order; classifier failures are
// reported on stderr and contribute nothing.
struct ClassifiedCorpus {
    std::vector<std::pair<std::string, TopicDistribution>> texts;  // (text id, kept scores)
    double score_mean = 0.0;

    const TopicDistribution* find(const std::string& text_id) const;
};

ClassifiedCorpus classify_corpus(const DefinitionalSetting& s, const InductionConfig& cfg);

// Text topic network: vertex weights sum the kept membership values over all
// texts, arc weights sum the membership products over hyperlinked text pairs.
// Zero-weight vertices and arcs are omitted.
TopicNetwork induce_ttn(const DefinitionalSetting& s, const InductionConfig& cfg);

// Author topic network: the same vertex label set as the given text topic
// network, re-weighted by author activity (per-author activity shares scaled
// by 1/p, 1 or p against the reference mean) and by co-authorship strength
// rescaled against the reference co-authorship mean. Arc set is a subset of
// the text topic network's arc set.
TopicNetwork induce_atn(const DefinitionalSetting& s, const TopicNetwork& ttn,
                        const InductionConfig& cfg);

// Word topic network: arcs of the text topic network re-weighted by lexical
// overlap; every shared token type of a linked text pair contributes the
// membership product times (1 + link weight).
TopicNetwork induce_wtn(const DefinitionalSetting& s, const TopicNetwork& ttn,
                        const InductionConfig& cfg);

// Auxiliary generating layer for the generic engine: units with a sparse
// relation among them and a unit-text association (the margin evidence).
struct AuxLayer {
    std::vector<std::string> units;  // sorted
    std::vector<std::tuple<std::string, std::string, double>> arcs;  // sorted by (src, dst)
    std::map<std::string, std::map<std::string, double>> margin;     // text -> unit -> value > 0

    static AuxLayer from_author_layer(const LabeledDigraph& author_layer, const EditHistory& h,
                                      const Corpus& c);
    static AuxLayer from_word_layer(const Corpus& c);
};

// Evidence combinators of the generic engine. All callbacks must be
// monotonically increasing in their numeric arguments, non-negative, and
// vanish when the margin evidence is zero. The reverse-affinity hooks are
// reserved extension points and are not evaluated.
struct GenericCombinators {
    // alpha: rescales the vertex sum; receives the topic label and the texts
    // that contributed to it, in id order.
    std::function<double(const std::string& label, double sum,
                         const std::vector<std::string>& contributing_texts)>
        vertex_scale;
    // beta: evidence a (text, unit) pair contributes to a topic's weight.
    std::function<double(double kept_theta, const std::string& unit, const std::string& text,
                         double margin_value)>
        vertex_term;
    // gamma: rescales the arc sum.
    std::function<double(double sum)> arc_scale;
    // delta: evidence a (text pair, unit pair) contributes to a topic link.
    std::function<double(double kept_theta_x, double kept_theta_y, const std::string& unit_r,
                         const std::string& unit_s, const std::string& text_x,
                         const std::string& text_y, double margin_rx, double margin_sy,
                         double unit_relation, double text_relation)>
        arc_term;

    std::function<double(const std::string& label, const std::string& text)>
        reverse_text_affinity;  // reserved
    std::function<double(const std::string& label, const std::string& unit)>
        reverse_unit_affinity;  // reserved
};

// General induction over the pivotal text layer plus at most one auxiliary
// layer. The dedicated inductions above are expressible as instantiations of
// this engine; see module3_* below.
TopicNetwork induce_generic(const DefinitionalSetting& s, const InductionConfig& cfg,
                            const GenericCombinators& combinators,
                            const AuxLayer* aux = nullptr);

// Combinator packs reproducing the dedicated inductions bit for bit.
GenericCombinators module3_ttn_combinators();
GenericCombinators module3_atn_combinators(const EditHistory& h, const ReferenceStats& stats,
                                           double p);
GenericCombinators module3_wtn_combinators();

// Shared weighting helpers (kept inline so both induction paths evaluate
// identical floating-point expressions).

// Rescales a value against a reference mean into (0, 2).
inline double scale_ratio(double value, double reference) {
    return 2.0 * value / (value + reference);
}

// Activity share of an author on a text, penalized or rewarded by p for
// below- or above-average activity. Equality to the mean is taken up to a
// 1e-12 relative tolerance.
inline double activity_share_factor(double activity, double total, double mean_activity,
                                    double p) {
    double share = activity / total;
    if (std::abs(activity - mean_activity) <= 1e-12 * mean_activity) return share;
    return activity < mean_activity ? share / p : share * p;
}

inline double atn_arc_product(double coauthorship_scale, double theta_x, double factor_x,
                              double theta_y, double factor_y) {
    return coauthorship_scale * (theta_x * factor_x) * (theta_y * factor_y);
}

inline double lexical_arc_product(double theta_x, double theta_y, double occurrence_x,
                                  double occurrence_y, double relatedness, double link_weight) {
    return theta_x * theta_y * occurrence_x * occurrence_y * (relatedness + link_weight);
}

// Undirected derivation: an edge exists when either arc does; both arcs merge
// through zeta1 (default: mean), single arcs pass through zeta2 (default:
// identity).
TopicNetwork to_undirected(const TopicNetwork& t,
                           std::function<double(double, double)> zeta1 = nullptr,
                           std::function<double(double)> zeta2 = nullptr);

struct MultiplexTopicNetwork {
    struct MarginArc {
        std::size_t from_layer = 0;
        std::size_t to_layer = 0;
        std::string label;
    };

    std::vector<TopicNetwork> layers;
    std::vector<MarginArc> margins;  // one per equally labeled vertex pair and direction
};

// Bundles topic networks over the same scheme; margin arcs connect equally
// labeled vertices of every ordered layer pair. When a scheme is given, all
// vertex labels must be codes of it.
MultiplexTopicNetwork build_mtn(std::vector<TopicNetwork> layers,
                                const TopicScheme* scheme = nullptr);

}  // namespace topicnet
