#pragma once

#include <map>
#include <string>
#include <vector>

#include "topicnet/graph.hpp"

namespace topicnet {

struct CorpusText {
    std::string id;
    std::string title;
    std::vector<std::string> tokens;
    std::vector<std::string> links;          // ids of linked texts
    std::map<std::string, double> meta;      // plain numeric annotations
};

// Pre-resolved document collection: ids unique, links referencing unknown
// texts are dropped at load time.
struct Corpus {
    std::string id;
    std::vector<CorpusText> texts;  // sorted by id

    static Corpus from_json(const std::string& text, const std::string& corpus_id = "");
    static Corpus load(const std::string& path);
    const CorpusText* find(const std::string& id) const;
};

struct Revision {
    std::string text;
    std::string author;
    double bytes_added = 0.0;
};

class EditHistory {
public:
    EditHistory() = default;
    explicit EditHistory(std::vector<Revision> revisions);

    const std::vector<Revision>& revisions() const { return revisions_; }
    bool empty() const { return revisions_.empty(); }

    // Total content added by the author to the text across all revisions.
    double activity(const std::string& author, const std::string& text) const;

    // Per text: authors with positive activity, sorted.
    std::vector<std::string> active_authors(const std::string& text) const;
    double total_activity(const std::string& text) const;
    std::vector<std::string> authors() const;  // all authors, sorted

private:
    std::vector<Revision> revisions_;
    std::map<std::string, std::map<std::string, double>> by_text_;  // text -> author -> activity
};

// Loads {"texts": [...], "revisions": [...]} as one bundle.
struct CorpusBundle {
    Corpus corpus;
    EditHistory history;

    static CorpusBundle load(const std::string& path);
    static CorpusBundle from_json(const std::string& text, const std::string& corpus_id = "");
};

// Hyperlink layer: one vertex per text with unit weight, one unit-weight arc
// per link, kind "hyperlink".
LabeledDigraph build_text_layer(const Corpus& c);

// Co-authorship layer: vertex weight is the author's total activity; the arc
// set contains every ordered pair of authors (including reflexive pairs) that
// co-work on at least one text, weighted by the activity-share overlap summed
// over shared texts. Symmetric, kind "coauthorship".
LabeledDigraph build_author_layer(const Corpus& c, const EditHistory& h);

struct ReferenceStats {
    double mean_activity = 0.0;
    double mean_author_count = 0.0;
    double mean_coauthorship = 0.0;

    static ReferenceStats load(const std::string& path);
};

// Default co-authorship average used when no reference corpus is supplied.
inline constexpr double kDefaultMeanCoauthorship = 0.0027564072092594585;

// Means over the loaded corpus: activity per active author-text pair and
// active authors per text. The co-authorship mean falls back to the built-in
// default, which is not computable from a single small corpus.
ReferenceStats reference_stats(const Corpus& c, const EditHistory& h);

struct LinguisticMultilayerNetwork {
    LabeledDigraph text_layer;
    LabeledDigraph author_layer;
    const EditHistory* history = nullptr;
};

LinguisticMultilayerNetwork build_lmn(const Corpus& c, const EditHistory& h);

}  // namespace topicnet
