#include "topicnet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topicnet {

using nlohmann::json;

Corpus Corpus::from_json(const std::string& text, const std::string& corpus_id) {
    json j = json::parse(text);
    Corpus c;
    std::string own_id = j.value("id", std::string());
    c.id = !own_id.empty() ? own_id : (corpus_id.empty() ? std::string("corpus") : corpus_id);
    std::set<std::string> ids;
    for (const auto& t : j.value("texts", json::array())) {
        CorpusText ct;
        ct.id = t.at("id").get<std::string>();
        ct.title = t.value("title", std::string());
        for (const auto& tok : t.value("tokens", json::array()))
            ct.tokens.push_back(tok.get<std::string>());
        for (const auto& link : t.value("links", json::array()))
            ct.links.push_back(link.get<std::string>());
        if (t.contains("meta"))
            for (const auto& [key, value] : t.at("meta").items())
                ct.meta[key] = value.get<double>();
        if (!ids.insert(ct.id).second) throw std::invalid_argument("duplicate text id: " + ct.id);
        c.texts.push_back(std::move(ct));
    }
    std::sort(c.texts.begin(), c.texts.end(),
              [](const CorpusText& a, const CorpusText& b) { return a.id < b.id; });
    for (auto& t : c.texts) {
        std::vector<std::string> resolved;
        for (const auto& link : t.links)
            if (ids.count(link)) resolved.push_back(link);
        std::sort(resolved.begin(), resolved.end());
        resolved.erase(std::unique(resolved.begin(), resolved.end()), resolved.end());
        t.links = std::move(resolved);
    }
    return c;
}

Corpus Corpus::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

const CorpusText* Corpus::find(const std::string& id) const {
    auto it = std::lower_bound(texts.begin(), texts.end(), id,
                               [](const CorpusText& t, const std::string& key) { return t.id < key; });
    if (it == texts.end() || it->id != id) return nullptr;
    return &*it;
}

EditHistory::EditHistory(std::vector<Revision> revisions) : revisions_(std::move(revisions)) {
    for (const Revision& r : revisions_) {
        if (r.bytes_added < 0.0)
            throw std::invalid_argument("bytes_added must be non-negative: " + r.text);
        if (r.bytes_added > 0.0) by_text_[r.text][r.author] += r.bytes_added;
    }
}

double EditHistory::activity(const std::string& author, const std::string& text) const {
    auto t = by_text_.find(text);
    if (t == by_text_.end()) return 0.0;
    auto a = t->second.find(author);
    return a == t->second.end() ? 0.0 : a->second;
}

std::vector<std::string> EditHistory::active_authors(const std::string& text) const {
    std::vector<std::string> out;
    auto t = by_text_.find(text);
    if (t == by_text_.end()) return out;
    for (const auto& [author, act] : t->second) out.push_back(author);
    return out;
}

double EditHistory::total_activity(const std::string& text) const {
    double sum = 0.0;
    auto t = by_text_.find(text);
    if (t == by_text_.end()) return 0.0;
    for (const auto& [author, act] : t->second) sum += act;
    return sum;
}

std::vector<std::string> EditHistory::authors() const {
    std::set<std::string> names;
    for (const auto& [text, by_author] : by_text_)
        for (const auto& [author, act] : by_author) names.insert(author);
    return {names.begin(), names.end()};
}

CorpusBundle CorpusBundle::from_json(const std::string& text, const std::string& corpus_id) {
    CorpusBundle bundle;
    bundle.corpus = Corpus::from_json(text, corpus_id);
    json j = json::parse(text);
    std::vector<Revision> revisions;
    for (const auto& r : j.value("revisions", json::array())) {
        revisions.push_back({r.at("text").get<std::string>(), r.at("author").get<std::string>(),
                             r.value("bytes_added", 0.0)});
    }
    for (const Revision& r : revisions)
        if (!bundle.corpus.find(r.text))
            throw std::invalid_argument("revision references unknown text: " + r.text);
    bundle.history = EditHistory(std::move(revisions));
    return bundle;
}

CorpusBundle CorpusBundle::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string stem = path;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    return from_json(buffer.str(), stem);
}

LabeledDigraph build_text_layer(const Corpus& c) {
    std::vector<LabeledDigraph::Vertex> vertices;
    vertices.reserve(c.texts.size());
    for (const auto& t : c.texts) vertices.push_back({t.id, t.id, 1.0});
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& t : c.texts)
        for (const auto& link : t.links) arcs.push_back({t.id, link, 1.0, "hyperlink"});
    return LabeledDigraph(std::move(vertices), arcs);
}

LabeledDigraph build_author_layer(const Corpus& c, const EditHistory& h) {
    std::vector<std::string> authors = h.authors();
    std::vector<LabeledDigraph::Vertex> vertices;
    vertices.reserve(authors.size());
    for (const auto& a : authors) {
        double total = 0.0;
        for (const auto& t : c.texts) total += h.activity(a, t.id);
        vertices.push_back({a, a, total});
    }

    std::map<std::pair<std::string, std::string>, double> weights;
    for (const auto& t : c.texts) {
        auto active = h.active_authors(t.id);
        double total = h.total_activity(t.id);
        if (active.empty() || total <= 0.0) continue;
        for (const auto& r : active) {
            for (const auto& s : active) {
                double overlap = 2.0 * std::min(h.activity(r, t.id), h.activity(s, t.id)) / total;
                weights[{r, s}] += overlap;
            }
        }
    }
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [pair, w] : weights)
        arcs.push_back({pair.first, pair.second, w, "coauthorship"});
    return LabeledDigraph(std::move(vertices), arcs);
}

ReferenceStats ReferenceStats::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference stats file: " + path);
    json j = json::parse(in);
    ReferenceStats stats;
    stats.mean_activity = j.at("mean_activity").get<double>();
    stats.mean_author_count = j.at("mean_author_count").get<double>();
    stats.mean_coauthorship = j.value("mean_coauthorship", kDefaultMeanCoauthorship);
    if (stats.mean_activity <= 0.0 || stats.mean_author_count <= 0.0 ||
        stats.mean_coauthorship <= 0.0)
        throw std::invalid_argument("reference stats must be positive");
    return stats;
}

ReferenceStats reference_stats(const Corpus& c, const EditHistory& h) {
    if (c.texts.empty()) throw std::invalid_argument("reference_stats: empty corpus");
    if (h.empty()) throw std::invalid_argument("reference_stats: empty edit history");
    double activity_sum = 0.0;
    std::size_t pair_count = 0;
    double author_count_sum = 0.0;
    for (const auto& t : c.texts) {
        auto active = h.active_authors(t.id);
        author_count_sum += static_cast<double>(active.size());
        for (const auto& a : active) {
            activity_sum += h.activity(a, t.id);
            ++pair_count;
        }
    }
    if (pair_count == 0) throw std::invalid_argument("reference_stats: no positive activity");
    ReferenceStats stats;
    stats.mean_activity = activity_sum / static_cast<double>(pair_count);
    stats.mean_author_count = author_count_sum / static_cast<double>(c.texts.size());
    stats.mean_coauthorship = kDefaultMeanCoauthorship;
    return stats;
}

LinguisticMultilayerNetwork build_lmn(const Corpus& c, const EditHistory& h) {
    return {build_text_layer(c), build_author_layer(c, h), &h};
}

}  // namespace topicnet
