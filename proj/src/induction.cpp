#include "topicnet/induction.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topicnet {

using nlohmann::json;

std::string to_string(TopicNetworkMode mode) {
    switch (mode) {
        case TopicNetworkMode::kTtn: return "ttn";
        case TopicNetworkMode::kAtn: return "atn";
        case TopicNetworkMode::kWtn: return "wtn";
        case TopicNetworkMode::kGeneric: return "generic";
    }
    return "generic";
}

TopicNetworkMode topic_network_mode_from_string(const std::string& name) {
    if (name == "ttn") return TopicNetworkMode::kTtn;
    if (name == "atn") return TopicNetworkMode::kAtn;
    if (name == "wtn") return TopicNetworkMode::kWtn;
    if (name == "generic") return TopicNetworkMode::kGeneric;
    throw std::invalid_argument("unknown topic network mode: " + name);
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_digest(const InductionConfig& cfg) {
    std::ostringstream key;
    key << "m_bot=" << cfg.m_bot << ";p=" << cfg.p << ";level=" << cfg.level
        << ";act=" << cfg.reference.mean_activity << ";count=" << cfg.reference.mean_author_count
        << ";coauth=" << cfg.reference.mean_coauthorship;
    std::ostringstream hex;
    hex << std::hex << fnv1a(key.str());
    return hex.str();
}

void require_setting(const DefinitionalSetting& s) {
    if (!s.scheme || !s.classifier || !s.corpus)
        throw std::invalid_argument("definitional setting is incomplete");
}

}  // namespace

std::string topic_network_to_json(const TopicNetwork& t) {
    json vertices = json::array();
    for (const auto& v : t.graph.vertices())
        vertices.push_back({{"id", v.id}, {"label", v.label}, {"weight", v.weight}});
    json arcs = json::array();
    for (const auto& a : t.graph.arcs())
        arcs.push_back({{"src", t.graph.vertex(a.src).id},
                        {"dst", t.graph.vertex(a.dst).id},
                        {"weight", a.weight},
                        {"kind", a.kind}});
    json j{{"mode", to_string(t.mode)},
           {"undirected", t.undirected},
           {"provenance", {{"corpus", t.corpus_id}, {"config", t.config_digest}}},
           {"vertices", vertices},
           {"arcs", arcs}};
    return j.dump(2);
}

TopicNetwork topic_network_from_json(const std::string& text) {
    json j = json::parse(text);
    TopicNetwork t;
    t.mode = topic_network_mode_from_string(j.value("mode", std::string("generic")));
    t.undirected = j.value("undirected", false);
    if (j.contains("provenance")) {
        t.corpus_id = j["provenance"].value("corpus", std::string());
        t.config_digest = j["provenance"].value("config", std::string());
    }
    std::vector<LabeledDigraph::Vertex> vertices;
    for (const auto& v : j.value("vertices", json::array()))
        vertices.push_back({v.at("id").get<std::string>(),
                            v.value("label", v.at("id").get<std::string>()),
                            v.value("weight", 1.0)});
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& a : j.value("arcs", json::array()))
        arcs.push_back({a.at("src").get<std::string>(), a.at("dst").get<std::string>(),
                        a.value("weight", 1.0), a.value("kind", std::string())});
    t.graph = LabeledDigraph(std::move(vertices), arcs);
    return t;
}

TopicNetwork load_topic_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topic network file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return topic_network_from_json(buffer.str());
}

void save_topic_network(const TopicNetwork& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write topic network file: " + path);
    out << topic_network_to_json(t) << '\n';
}

const TopicDistribution* ClassifiedCorpus::find(const std::string& text_id) const {
    auto it = std::lower_bound(texts.begin(), texts.end(), text_id,
                               [](const auto& entry, const std::string& key) {
                                   return entry.first < key;
                               });
    if (it == texts.end() || it->first != text_id) return nullptr;
    return &it->second;
}

ClassifiedCorpus classify_corpus(const DefinitionalSetting& s, const InductionConfig& cfg) {
    require_setting(s);
    if (cfg.p <= 1.0) throw std::invalid_argument("induction config: p must be > 1");
    if (cfg.m_bot == 0) throw std::invalid_argument("induction config: m_bot must be >= 1");

    std::vector<std::pair<std::string, TopicDistribution>> raw;
    raw.reserve(s.corpus->texts.size());
    for (const auto& text : s.corpus->texts) {
        TopicDistribution projected;
        try {
            TopicDistribution d = s.classifier->classify(text.tokens);
            for (const auto& [code, score] : d) {
                if (score <= 0.0) continue;
                if (!s.scheme->contains(code))
                    throw std::invalid_argument("classifier emitted unknown topic code: " + code);
                if (s.scheme->node(code).level < cfg.level) continue;
                std::string target = s.scheme->ancestor_at(code, cfg.level);
                auto [it, inserted] = projected.try_emplace(target, score);
                if (!inserted) it->second = std::max(it->second, score);
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            std::cerr << "classification failed for text " << text.id << ": " << e.what() << '\n';
            projected.clear();
        }
        raw.emplace_back(text.id, std::move(projected));
    }

    std::vector<TopicDistribution> all;
    all.reserve(raw.size());
    for (const auto& [id, d] : raw) all.push_back(d);
    ClassifiedCorpus cc;
    cc.score_mean = membership_mean(all);
    cc.texts.reserve(raw.size());
    for (auto& [id, d] : raw)
        cc.texts.emplace_back(id, top_m_filter(d, cfg.m_bot, cc.score_mean));
    return cc;
}

namespace {

TopicNetwork assemble(std::map<std::string, double> mu,
                      std::map<std::pair<std::string, std::string>, double> nu,
                      TopicNetworkMode mode, const std::string& corpus_id,
                      const std::string& digest) {
    std::vector<LabeledDigraph::Vertex> vertices;
    for (const auto& [code, weight] : mu)
        if (weight > 0.0) vertices.push_back({code, code, weight});
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [pair, weight] : nu) {
        if (weight <= 0.0) continue;
        if (mu.count(pair.first) == 0 || mu[pair.first] <= 0.0) continue;
        if (mu.count(pair.second) == 0 || mu[pair.second] <= 0.0) continue;
        arcs.push_back({pair.first, pair.second, weight, "topic"});
    }
    TopicNetwork t;
    t.graph = LabeledDigraph(std::move(vertices), arcs);
    t.mode = mode;
    t.corpus_id = corpus_id;
    t.config_digest = digest;
    return t;
}

}  // namespace

TopicNetwork induce_ttn(const DefinitionalSetting& s, const InductionConfig& cfg) {
    ClassifiedCorpus cc = classify_corpus(s, cfg);
    if (s.corpus->texts.empty()) throw std::invalid_argument("induce_ttn: empty corpus");

    std::map<std::string, double> mu;
    for (const auto& [id, dist] : cc.texts)
        for (const auto& [code, score] : dist) mu[code] += score;

    std::map<std::pair<std::string, std::string>, double> nu;
    for (const auto& text : s.corpus->texts) {
        const TopicDistribution* dx = cc.find(text.id);
        if (!dx || dx->empty()) continue;
        for (const auto& link : text.links) {
            const TopicDistribution* dy = cc.find(link);
            if (!dy || dy->empty()) continue;
            for (const auto& [v, sv] : *dx)
                for (const auto& [w, sw] : *dy) nu[{v, w}] += sv * sw;
        }
    }
    return assemble(std::move(mu), std::move(nu), TopicNetworkMode::kTtn, s.corpus->id,
                    config_digest(cfg));
}

TopicNetwork induce_atn(const DefinitionalSetting& s, const TopicNetwork& ttn,
                        const InductionConfig& cfg) {
    require_setting(s);
    if (!s.history || s.history->empty())
        throw std::invalid_argument("induce_atn: edit history is required");
    ClassifiedCorpus cc = classify_corpus(s, cfg);
    const EditHistory& h = *s.history;
    const ReferenceStats& ref = cfg.reference;
    if (ref.mean_activity <= 0.0 || ref.mean_author_count <= 0.0 || ref.mean_coauthorship <= 0.0)
        throw std::invalid_argument("induce_atn: reference stats must be positive");

    LabeledDigraph author_layer = build_author_layer(*s.corpus, h);

    // Vertex weights: activity-scaled membership sums, then the author-count
    // rescaling over each topic's contributing texts.
    std::map<std::string, double> acc;
    std::map<std::string, std::vector<std::string>> contributing;
    for (const auto& [text_id, dist] : cc.texts) {
        if (dist.empty()) continue;
        for (const auto& [code, score] : dist) contributing[code].push_back(text_id);
        auto active = h.active_authors(text_id);
        if (active.empty()) continue;
        double total = h.total_activity(text_id);
        for (const auto& author : active) {
            double factor =
                activity_share_factor(h.activity(author, text_id), total, ref.mean_activity, cfg.p);
            for (const auto& [code, score] : dist) acc[code] += score * factor;
        }
    }

    std::map<std::string, double> mu;
    for (const auto& v : ttn.graph.vertices()) {
        const auto texts_it = contributing.find(v.label);
        if (texts_it == contributing.end())
            throw std::runtime_error("induce_atn: topic " + v.label +
                                     " has no contributing text");
        double scale_sum = 0.0;
        for (const auto& text_id : texts_it->second)
            scale_sum += scale_ratio(static_cast<double>(h.active_authors(text_id).size()),
                                     ref.mean_author_count);
        double omega = scale_sum / static_cast<double>(texts_it->second.size());
        double weight = omega * acc[v.label];
        if (weight <= 0.0)
            throw std::runtime_error("induce_atn: topic " + v.label +
                                     " has no authored contributing text");
        mu[v.label] = weight;
    }

    std::map<std::pair<std::string, std::string>, double> nu;
    for (const auto& text : s.corpus->texts) {
        const TopicDistribution* dx = cc.find(text.id);
        if (!dx || dx->empty()) continue;
        double total_x = h.total_activity(text.id);
        for (const auto& link : text.links) {
            const TopicDistribution* dy = cc.find(link);
            if (!dy || dy->empty()) continue;
            double total_y = h.total_activity(link);
            for (const auto& arc : author_layer.arcs()) {
                const std::string& r = author_layer.vertex(arc.src).id;
                const std::string& ss = author_layer.vertex(arc.dst).id;
                double act_rx = h.activity(r, text.id);
                if (act_rx <= 0.0) continue;
                double act_sy = h.activity(ss, link);
                if (act_sy <= 0.0) continue;
                double coauth = scale_ratio(arc.weight, ref.mean_coauthorship);
                double fx = activity_share_factor(act_rx, total_x, ref.mean_activity, cfg.p);
                double fy = activity_share_factor(act_sy, total_y, ref.mean_activity, cfg.p);
                for (const auto& [v, sv] : *dx)
                    for (const auto& [w, sw] : *dy)
                        nu[{v, w}] += atn_arc_product(coauth, sv, fx, sw, fy);
            }
        }
    }

    std::vector<LabeledDigraph::Vertex> vertices;
    for (const auto& [code, weight] : mu) vertices.push_back({code, code, weight});
    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [pair, weight] : nu)
        if (weight > 0.0) arcs.push_back({pair.first, pair.second, weight, "topic"});

    TopicNetwork t;
    t.graph = LabeledDigraph(std::move(vertices), arcs);
    t.mode = TopicNetworkMode::kAtn;
    t.corpus_id = s.corpus->id;
    t.config_digest = config_digest(cfg);
    return t;
}

TopicNetwork induce_wtn(const DefinitionalSetting& s, const TopicNetwork& ttn,
                        const InductionConfig& cfg) {
    require_setting(s);
    ClassifiedCorpus cc = classify_corpus(s, cfg);

    std::map<std::pair<std::string, std::string>, double> nu;
    for (const auto& text : s.corpus->texts) {
        const TopicDistribution* dx = cc.find(text.id);
        if (!dx || dx->empty()) continue;
        std::set<std::string> tokens_x(text.tokens.begin(), text.tokens.end());
        for (const auto& link : text.links) {
            const TopicDistribution* dy = cc.find(link);
            if (!dy || dy->empty()) continue;
            const CorpusText* other = s.corpus->find(link);
            std::set<std::string> tokens_y(other->tokens.begin(), other->tokens.end());
            for (const auto& token : tokens_x) {
                if (tokens_y.count(token) == 0) continue;
                for (const auto& [v, sv] : *dx)
                    for (const auto& [w, sw] : *dy)
                        nu[{v, w}] += lexical_arc_product(sv, sw, 1.0, 1.0, 1.0, 1.0);
            }
        }
    }

    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [pair, weight] : nu)
        if (weight > 0.0) arcs.push_back({pair.first, pair.second, weight, "topic"});

    TopicNetwork t;
    t.graph = LabeledDigraph(ttn.graph.vertices(), arcs);
    t.mode = TopicNetworkMode::kWtn;
    t.corpus_id = s.corpus->id;
    t.config_digest = config_digest(cfg);
    return t;
}

AuxLayer AuxLayer::from_author_layer(const LabeledDigraph& author_layer, const EditHistory& h,
                                     const Corpus& c) {
    AuxLayer aux;
    for (const auto& v : author_layer.vertices()) aux.units.push_back(v.id);
    std::sort(aux.units.begin(), aux.units.end());
    for (const auto& a : author_layer.arcs())
        aux.arcs.emplace_back(author_layer.vertex(a.src).id, author_layer.vertex(a.dst).id,
                              a.weight);
    std::sort(aux.arcs.begin(), aux.arcs.end());
    for (const auto& text : c.texts)
        for (const auto& author : h.active_authors(text.id))
            aux.margin[text.id][author] = h.activity(author, text.id);
    return aux;
}

AuxLayer AuxLayer::from_word_layer(const Corpus& c) {
    AuxLayer aux;
    std::set<std::string> vocabulary;
    for (const auto& text : c.texts)
        for (const auto& token : text.tokens) vocabulary.insert(token);
    aux.units.assign(vocabulary.begin(), vocabulary.end());
    for (const auto& token : aux.units) aux.arcs.emplace_back(token, token, 1.0);
    for (const auto& text : c.texts) {
        std::set<std::string> unique(text.tokens.begin(), text.tokens.end());
        for (const auto& token : unique) aux.margin[text.id][token] = 1.0;
    }
    return aux;
}

TopicNetwork induce_generic(const DefinitionalSetting& s, const InductionConfig& cfg,
                            const GenericCombinators& combinators, const AuxLayer* aux) {
    ClassifiedCorpus cc = classify_corpus(s, cfg);

    auto check = [](double value, const char* where) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::invalid_argument(std::string("induce_generic: ") + where +
                                        " returned an invalid value");
        return value;
    };

    static const std::map<std::string, double> kNoMargin;
    auto margin_row = [&](const std::string& text_id) -> const std::map<std::string, double>& {
        if (!aux) return kNoMargin;
        auto it = aux->margin.find(text_id);
        return it == aux->margin.end() ? kNoMargin : it->second;
    };

    std::map<std::string, double> acc;
    std::map<std::string, std::vector<std::string>> contributing;
    for (const auto& [text_id, dist] : cc.texts) {
        if (dist.empty()) continue;
        for (const auto& [code, score] : dist) contributing[code].push_back(text_id);
        if (aux && combinators.vertex_term) {
            for (const auto& [unit, margin_value] : margin_row(text_id)) {
                if (margin_value <= 0.0) continue;
                for (const auto& [code, score] : dist)
                    acc[code] +=
                        check(combinators.vertex_term(score, unit, text_id, margin_value),
                              "vertex_term");
            }
        } else if (combinators.vertex_term) {
            for (const auto& [code, score] : dist)
                acc[code] += check(combinators.vertex_term(score, "", text_id, 1.0), "vertex_term");
        } else {
            for (const auto& [code, score] : dist) acc[code] += score;
        }
    }

    std::map<std::string, double> mu;
    for (const auto& [code, sum] : acc) {
        double scaled = combinators.vertex_scale
                            ? check(combinators.vertex_scale(code, sum, contributing[code]),
                                    "vertex_scale")
                            : sum;
        mu[code] = scaled;
    }

    std::map<std::pair<std::string, std::string>, double> nu;
    for (const auto& text : s.corpus->texts) {
        const TopicDistribution* dx = cc.find(text.id);
        if (!dx || dx->empty()) continue;
        const auto& margins_x = margin_row(text.id);
        for (const auto& link : text.links) {
            const TopicDistribution* dy = cc.find(link);
            if (!dy || dy->empty()) continue;
            const auto& margins_y = margin_row(link);
            const double link_weight = 1.0;
            if (aux && combinators.arc_term) {
                for (const auto& [r, ss, relation] : aux->arcs) {
                    auto mr = margins_x.find(r);
                    if (mr == margins_x.end() || mr->second <= 0.0) continue;
                    auto ms = margins_y.find(ss);
                    if (ms == margins_y.end() || ms->second <= 0.0) continue;
                    for (const auto& [v, sv] : *dx)
                        for (const auto& [w, sw] : *dy)
                            nu[{v, w}] += check(
                                combinators.arc_term(sv, sw, r, ss, text.id, link, mr->second,
                                                     ms->second, relation, link_weight),
                                "arc_term");
                }
            } else if (combinators.arc_term) {
                for (const auto& [v, sv] : *dx)
                    for (const auto& [w, sw] : *dy)
                        nu[{v, w}] += check(combinators.arc_term(sv, sw, "", "", text.id, link,
                                                                 1.0, 1.0, 1.0, link_weight),
                                            "arc_term");
            } else {
                for (const auto& [v, sv] : *dx)
                    for (const auto& [w, sw] : *dy) nu[{v, w}] += sv * sw;
            }
        }
    }
    for (auto& [pair, weight] : nu)
        weight = combinators.arc_scale ? check(combinators.arc_scale(weight), "arc_scale") : weight;

    return assemble(std::move(mu), std::move(nu), TopicNetworkMode::kGeneric, s.corpus->id,
                    config_digest(cfg));
}

GenericCombinators module3_ttn_combinators() { return {}; }

GenericCombinators module3_atn_combinators(const EditHistory& h, const ReferenceStats& stats,
                                           double p) {
    GenericCombinators c;
    c.vertex_term = [&h, stats, p](double theta, const std::string& unit, const std::string& text,
                                   double margin_value) {
        double total = h.total_activity(text);
        (void)unit;
        return theta * activity_share_factor(margin_value, total, stats.mean_activity, p);
    };
    c.vertex_scale = [&h, stats](const std::string& label, double sum,
                                 const std::vector<std::string>& texts) {
        (void)label;
        if (texts.empty()) return 0.0;
        double scale_sum = 0.0;
        for (const auto& text_id : texts)
            scale_sum += scale_ratio(static_cast<double>(h.active_authors(text_id).size()),
                                     stats.mean_author_count);
        return (scale_sum / static_cast<double>(texts.size())) * sum;
    };
    c.arc_term = [&h, stats, p](double theta_x, double theta_y, const std::string& r,
                                const std::string& s, const std::string& x, const std::string& y,
                                double margin_rx, double margin_sy, double unit_relation,
                                double text_relation) {
        (void)r;
        (void)s;
        (void)text_relation;
        double fx = activity_share_factor(margin_rx, h.total_activity(x), stats.mean_activity, p);
        double fy = activity_share_factor(margin_sy, h.total_activity(y), stats.mean_activity, p);
        return atn_arc_product(scale_ratio(unit_relation, stats.mean_coauthorship), theta_x, fx,
                               theta_y, fy);
    };
    return c;
}

GenericCombinators module3_wtn_combinators() {
    GenericCombinators c;
    c.arc_term = [](double theta_x, double theta_y, const std::string&, const std::string&,
                    const std::string&, const std::string&, double margin_rx, double margin_sy,
                    double unit_relation, double text_relation) {
        return lexical_arc_product(theta_x, theta_y, margin_rx, margin_sy, unit_relation,
                                   text_relation);
    };
    return c;
}

TopicNetwork to_undirected(const TopicNetwork& t, std::function<double(double, double)> zeta1,
                           std::function<double(double)> zeta2) {
    if (!zeta1) zeta1 = [](double a, double b) { return 0.5 * (a + b); };
    if (!zeta2) zeta2 = [](double a) { return a; };

    const LabeledDigraph& g = t.graph;
    std::map<std::pair<std::string, std::string>, double> edges;
    for (const auto& a : g.arcs()) {
        const std::string& src = g.vertex(a.src).id;
        const std::string& dst = g.vertex(a.dst).id;
        if (src == dst) {
            edges[{src, dst}] = zeta2(a.weight);
            continue;
        }
        auto key = std::minmax(src, dst);
        if (edges.count({key.first, key.second})) continue;
        const LabeledDigraph::Arc* reverse = g.find_arc(a.dst, a.src);
        double weight = reverse ? zeta1(g.find_arc(a.src, a.dst)->weight, reverse->weight)
                                : zeta2(a.weight);
        edges[{key.first, key.second}] = weight;
    }

    std::vector<LabeledDigraph::ArcSpec> arcs;
    for (const auto& [edge, weight] : edges) {
        arcs.push_back({edge.first, edge.second, weight, "topic"});
        if (edge.first != edge.second) arcs.push_back({edge.second, edge.first, weight, "topic"});
    }
    TopicNetwork out;
    out.graph = LabeledDigraph(g.vertices(), arcs);
    out.mode = t.mode;
    out.undirected = true;
    out.corpus_id = t.corpus_id;
    out.config_digest = t.config_digest;
    return out;
}

MultiplexTopicNetwork build_mtn(std::vector<TopicNetwork> layers, const TopicScheme* scheme) {
    if (scheme) {
        for (const auto& layer : layers)
            for (const auto& v : layer.graph.vertices())
                if (!scheme->contains(v.label))
                    throw std::invalid_argument("build_mtn: label outside the scheme: " + v.label);
    }
    MultiplexTopicNetwork mtn;
    mtn.layers = std::move(layers);
    for (std::size_t i = 0; i < mtn.layers.size(); ++i) {
        for (std::size_t j = 0; j < mtn.layers.size(); ++j) {
            if (i == j) continue;
            for (const auto& v : mtn.layers[i].graph.vertices())
                if (mtn.layers[j].graph.find_label(v.label))
                    mtn.margins.push_back({i, j, v.label});
        }
    }
    return mtn;
}

}  // namespace topicnet
