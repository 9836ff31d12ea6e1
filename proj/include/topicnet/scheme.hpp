#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace topicnet {

// Sparse topic membership scores in (0, 1], keyed by topic code. Map order
// doubles as the deterministic tie-break order.
using TopicDistribution = std::map<std::string, double>;

// Hierarchical topic scheme: a forest of top classes whose children refine
// them level by level. Codes are unique across the scheme.
class TopicScheme {
public:
    struct Node {
        std::string code;
        std::string label;
        int level = 1;
        std::string parent;  // empty for a top class
    };

    TopicScheme() = default;
    explicit TopicScheme(std::vector<Node> nodes);

    static TopicScheme from_json(const std::string& text);
    static TopicScheme load(const std::string& path);

    bool contains(const std::string& code) const { return index_.count(code) > 0; }
    const Node& node(const std::string& code) const;
    const std::vector<Node>& nodes() const { return nodes_; }

    // Codes of a given level, sorted.
    std::vector<std::string> codes_at_level(int level) const;

    // Ancestor of the code at the requested level (the code itself when its
    // level matches).
    std::string ancestor_at(const std::string& code, int level) const;

    // Class code used by the type-sensitive clustering statistics: the parent
    // class of the code, or the code itself for top classes.
    std::string parent_class(const std::string& code) const;

    int max_level() const { return max_level_; }

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    int max_level_ = 0;
};

// Text-to-topic classifier. Implementations must be deterministic and safe
// for concurrent classify calls.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual TopicDistribution classify(const std::vector<std::string>& tokens) const = 0;
};

// Lexicon-backed classifier: each token votes for one topic with a weight;
// votes per topic are summed and the result is normalized so the maximum
// score is 1. Tokens without a lexicon entry are ignored.
class LexiconClassifier final : public Classifier {
public:
    struct Entry {
        std::string code;
        double weight = 1.0;
    };

    explicit LexiconClassifier(std::unordered_map<std::string, Entry> lexicon);

    // TSV rows: token <TAB> code <TAB> weight
    static LexiconClassifier from_tsv(const std::string& text);
    static LexiconClassifier load(const std::string& path);

    TopicDistribution classify(const std::vector<std::string>& tokens) const override;

    const std::unordered_map<std::string, Entry>& lexicon() const { return lexicon_; }

private:
    std::unordered_map<std::string, Entry> lexicon_;
};

// Classification scores worth keeping: the m_bot highest values of the
// distribution that also reach the corpus-wide mean. Ties at the cutoff are
// resolved by topic-code order.
TopicDistribution top_m_filter(const TopicDistribution& d, std::size_t m_bot, double global_mean);

// Mean over the set of distinct membership values appearing in the given
// distributions; 0 when there are none.
double membership_mean(const std::vector<TopicDistribution>& distributions);

}  // namespace topicnet
