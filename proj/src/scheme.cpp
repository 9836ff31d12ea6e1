#include "topicnet/scheme.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topicnet {

using nlohmann::json;

TopicScheme::TopicScheme(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (!index_.emplace(n.code, i).second)
            throw std::invalid_argument("duplicate topic code: " + n.code);
        max_level_ = std::max(max_level_, n.level);
    }
    for (const Node& n : nodes_) {
        if (n.parent.empty()) {
            if (n.level != 1) throw std::invalid_argument("top class must be level 1: " + n.code);
        } else {
            auto it = index_.find(n.parent);
            if (it == index_.end())
                throw std::invalid_argument("unknown parent code: " + n.parent);
            if (nodes_[it->second].level + 1 != n.level)
                throw std::invalid_argument("child level must be parent level + 1: " + n.code);
        }
    }
}

namespace {

void collect(const json& j, int level, const std::string& parent,
             std::vector<TopicScheme::Node>& out) {
    TopicScheme::Node n;
    n.code = j.at("code").get<std::string>();
    n.label = j.value("label", std::string());
    n.level = level;
    n.parent = parent;
    out.push_back(n);
    for (const auto& child : j.value("children", json::array()))
        collect(child, level + 1, n.code, out);
}

}  // namespace

TopicScheme TopicScheme::from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<Node> nodes;
    for (const auto& top : j) collect(top, 1, "", nodes);
    return TopicScheme(std::move(nodes));
}

TopicScheme TopicScheme::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scheme file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

const TopicScheme::Node& TopicScheme::node(const std::string& code) const {
    auto it = index_.find(code);
    if (it == index_.end()) throw std::invalid_argument("unknown topic code: " + code);
    return nodes_[it->second];
}

std::vector<std::string> TopicScheme::codes_at_level(int level) const {
    std::vector<std::string> out;
    for (const Node& n : nodes_)
        if (n.level == level) out.push_back(n.code);
    std::sort(out.begin(), out.end());
    return out;
}

std::string TopicScheme::ancestor_at(const std::string& code, int level) const {
    const Node* n = &node(code);
    if (n->level < level)
        throw std::invalid_argument("code " + code + " is above the requested level");
    while (n->level > level) n = &node(n->parent);
    return n->code;
}

std::string TopicScheme::parent_class(const std::string& code) const {
    const Node& n = node(code);
    return n.parent.empty() ? n.code : n.parent;
}

LexiconClassifier::LexiconClassifier(std::unordered_map<std::string, Entry> lexicon)
    : lexicon_(std::move(lexicon)) {
    if (lexicon_.empty()) throw std::invalid_argument("lexicon must not be empty");
}

LexiconClassifier LexiconClassifier::from_tsv(const std::string& text) {
    std::unordered_map<std::string, Entry> lexicon;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string token, code, weight;
        if (!std::getline(row, token, '\t') || !std::getline(row, code, '\t'))
            throw std::invalid_argument("bad lexicon row " + std::to_string(lineno));
        double w = 1.0;
        if (std::getline(row, weight, '\t')) w = std::stod(weight);
        if (w <= 0.0) throw std::invalid_argument("lexicon weight must be positive: " + token);
        if (!lexicon.emplace(token, Entry{code, w}).second)
            throw std::invalid_argument("duplicate lexicon token: " + token);
    }
    return LexiconClassifier(std::move(lexicon));
}

LexiconClassifier LexiconClassifier::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_tsv(buffer.str());
}

TopicDistribution LexiconClassifier::classify(const std::vector<std::string>& tokens) const {
    TopicDistribution scores;
    for (const auto& token : tokens) {
        auto it = lexicon_.find(token);
        if (it == lexicon_.end()) continue;
        scores[it->second.code] += it->second.weight;
    }
    double top = 0.0;
    for (const auto& [code, score] : scores) top = std::max(top, score);
    if (top <= 0.0) return {};
    TopicDistribution normalized;
    for (const auto& [code, score] : scores)
        if (score > 0.0) normalized[code] = score / top;
    return normalized;
}

TopicDistribution top_m_filter(const TopicDistribution& d, std::size_t m_bot, double global_mean) {
    if (m_bot == 0) throw std::invalid_argument("top_m_filter: m_bot must be >= 1");
    std::vector<std::pair<std::string, double>> entries(d.begin(), d.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    TopicDistribution kept;
    for (std::size_t i = 0; i < entries.size() && i < m_bot; ++i)
        if (entries[i].second >= global_mean) kept.insert(entries[i]);
    return kept;
}

double membership_mean(const std::vector<TopicDistribution>& distributions) {
    std::set<double> values;
    for (const auto& d : distributions)
        for (const auto& [code, score] : d)
            if (score > 0.0) values.insert(score);
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace topicnet
