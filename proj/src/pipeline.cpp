#include "topicnet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "topicnet/analysis.hpp"
#include "topicnet/graph_io.hpp"

namespace topicnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string trim(const std::string& text) {
    auto begin = text.find_first_not_of(" \t\r");
    auto end = text.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return text.substr(begin, end - begin + 1);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

// Failures abort the run tagged with the stage they happened in.
template <class Fn>
auto run_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error("stage " + stage + ": " + e.what());
    }
}

}  // namespace

PipelineConfig PipelineConfig::parse(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "scheme") cfg.scheme_path = value;
        else if (key == "lexicon") cfg.lexicon_path = value;
        else if (key == "corpus") {
            auto colon = value.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("corpus entries use class:path");
            cfg.corpora.emplace_back(trim(value.substr(0, colon)), trim(value.substr(colon + 1)));
        } else if (key == "measures" || key == "measure") {
            for (const auto& name : split(value, ','))
                cfg.measures.push_back(measure_from_string(trim(name)));
        } else if (key == "modes" || key == "mode") {
            for (const auto& name : split(value, ','))
                cfg.modes.push_back(topic_network_mode_from_string(trim(name)));
        } else if (key == "level") cfg.level = std::stoi(value);
        else if (key == "m_bot") cfg.m_bot = std::stoul(value);
        else if (key == "p") cfg.p = std::stod(value);
        else if (key == "classify") cfg.classify_mode = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "b1_iterations") cfg.b1_iterations = std::stoul(value);
        else if (key == "b2_reps") cfg.b2_reps = std::stoul(value);
        else if (key == "b3_reps") cfg.b3_reps = std::stoul(value);
        else if (key == "b4_reps") cfg.b4_reps = std::stoul(value);
        else if (key == "baselines") cfg.baselines = split(value, ',');
        else if (key == "reference_stats") cfg.reference_stats_path = value;
        else if (key == "closeness") cfg.closeness_path = value;
        else if (key == "out") cfg.out_dir = value;
        else throw std::invalid_argument("unknown config key: " + key);
    }
    if (cfg.scheme_path.empty()) throw std::invalid_argument("config: scheme is required");
    if (cfg.lexicon_path.empty()) throw std::invalid_argument("config: lexicon is required");
    if (cfg.corpora.empty()) throw std::invalid_argument("config: at least one corpus required");
    if (cfg.modes.empty()) cfg.modes.push_back(TopicNetworkMode::kTtn);
    if (cfg.measures.empty()) cfg.measures.push_back(MeasureId::kCosAvWeighted);
    if (cfg.classify_mode != "all" && cfg.classify_mode != "opt" && cfg.classify_mode != "ext")
        throw std::invalid_argument("config: classify must be all, opt or ext");
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    TopicScheme scheme = run_stage("ingest", [&] { return TopicScheme::load(cfg.scheme_path); });
    LexiconClassifier classifier =
        run_stage("ingest", [&] { return LexiconClassifier::load(cfg.lexicon_path); });

    struct LoadedCorpus {
        std::string class_label;
        CorpusBundle bundle;
    };
    std::vector<LoadedCorpus> corpora;
    for (const auto& [class_label, path] : cfg.corpora)
        corpora.push_back(
            {class_label, run_stage("ingest", [&] { return CorpusBundle::load(path); })});

    fs::create_directories(cfg.out_dir);
    fs::create_directories(fs::path(cfg.out_dir) / "networks");
    fs::create_directories(fs::path(cfg.out_dir) / "matrices");
    fs::create_directories(fs::path(cfg.out_dir) / "reports");
    fs::create_directories(fs::path(cfg.out_dir) / "powerfit");

    // Provenance: configuration digest plus the effective settings.
    {
        std::ostringstream key;
        key << cfg.scheme_path << '|' << cfg.lexicon_path << '|' << cfg.level << '|' << cfg.m_bot
            << '|' << cfg.p << '|' << cfg.seed << '|' << cfg.classify_mode;
        for (const auto& [cls, path] : cfg.corpora) key << '|' << cls << ':' << path;
        json provenance{{"config_hash", fnv1a(key.str())},
                        {"seed", cfg.seed},
                        {"level", cfg.level},
                        {"m_bot", cfg.m_bot},
                        {"p", cfg.p},
                        {"classify", cfg.classify_mode}};
        write_file(fs::path(cfg.out_dir) / "provenance.json", provenance.dump(2) + "\n");
    }

    InductionConfig induction_cfg;
    induction_cfg.m_bot = cfg.m_bot;
    induction_cfg.p = cfg.p;
    induction_cfg.level = cfg.level;

    ClassResolver class_resolver = [&scheme](const std::string& label) {
        return scheme.contains(label) ? scheme.parent_class(label) : label;
    };

    // Induce the requested network modes per corpus.
    std::map<TopicNetworkMode, std::vector<TopicNetwork>> by_mode;
    std::map<std::string, std::string> genre_of;  // network item id -> class
    for (const auto& loaded : corpora) {
        const Corpus& corpus = loaded.bundle.corpus;
        const EditHistory& history = loaded.bundle.history;
        DefinitionalSetting setting{&scheme, &classifier, &corpus, &history};

        InductionConfig corpus_cfg = induction_cfg;
        if (cfg.reference_stats_path)
            corpus_cfg.reference = ReferenceStats::load(*cfg.reference_stats_path);
        else if (!history.empty())
            corpus_cfg.reference = reference_stats(corpus, history);

        TopicNetwork ttn = run_stage("induction", [&] { return induce_ttn(setting, corpus_cfg); });
        for (TopicNetworkMode mode : cfg.modes) {
            TopicNetwork net = run_stage("induction", [&] {
                switch (mode) {
                    case TopicNetworkMode::kTtn: return ttn;
                    case TopicNetworkMode::kAtn: return induce_atn(setting, ttn, corpus_cfg);
                    case TopicNetworkMode::kWtn: return induce_wtn(setting, ttn, corpus_cfg);
                    case TopicNetworkMode::kGeneric: break;
                }
                return induce_generic(setting, corpus_cfg, module3_ttn_combinators());
            });
            std::string name = corpus.id + "_" + to_string(mode);
            save_topic_network(net, (fs::path(cfg.out_dir) / "networks" / (name + ".json")).string());
            write_file(fs::path(cfg.out_dir) / "networks" / (name + ".dot"),
                       graph_to_dot(net.graph, name));
            genre_of[name] = loaded.class_label;
            by_mode[mode].push_back(std::move(net));
        }
    }

    PipelineResult result;
    result.out_dir = cfg.out_dir;

    // Pairwise similarity, baselines and the classification study per mode
    // and measure.
    for (const auto& [mode, nets] : by_mode) {
        if (nets.size() < 2) continue;
        GoldStandard gold;
        for (const auto& net : nets) {
            std::string name = net.corpus_id + "_" + to_string(net.mode);
            gold.items.push_back(name);
            gold.class_of[name] = genre_of[name];
        }
        std::sort(gold.items.begin(), gold.items.end());
        bool classifiable = gold.class_labels().size() >= 2;

        for (MeasureId measure : cfg.measures) {
            NamedMatrix sim = run_stage(
                "similarity", [&] { return similarity_matrix(nets, measure, class_resolver); });
            std::string stem = to_string(mode) + "_" + to_string(measure);
            save_matrix(sim, (fs::path(cfg.out_dir) / "matrices" / (stem + ".csv")).string());
            if (!classifiable) continue;

            FeatureMatrix features = FeatureMatrix::from_named(sim);
            json report;
            report["mode"] = to_string(mode);
            report["measure"] = to_string(measure);
            report["seed"] = cfg.seed;

            double observed = run_stage("classification", [&] {
                EvalReport all = classify_loo_all_features(features, gold);
                report["all"] = json::parse(all.to_json());
                double macro_f = all.macro_f;
                if (cfg.classify_mode == "opt" || cfg.classify_mode == "ext") {
                    GeneticConfig genetic;
                    genetic.seed = cfg.seed;
                    genetic.rounds = cfg.classify_mode == "ext" ? 500 : 50;
                    genetic.minimize = cfg.classify_mode == "ext";
                    GeneticResult search = genetic_search(features, gold, genetic);
                    json selected = json::parse(search.report.to_json());
                    selected["mask"] = search.mask;
                    report[cfg.classify_mode] = selected;
                    macro_f = search.report.macro_f;
                }
                return macro_f;
            });

            // Per-repetition scores double as plot source data.
            std::ostringstream score_rows;
            score_rows.precision(17);
            score_rows << "baseline,rep,macro_f\n";
            auto record = [&](const std::string& name, const BaselineResult& b) {
                report[name] = {{"mean", b.mean}, {"sd", b.sd}};
                for (std::size_t rep = 0; rep < b.scores.size(); ++rep)
                    score_rows << name << ',' << rep << ',' << b.scores[rep] << '\n';
            };
            run_stage("baselines", [&] {
                for (const auto& baseline : cfg.baselines) {
                    if (baseline == "b1") {
                        BaselineResult b = baseline_b1(gold, cfg.b1_iterations, cfg.seed);
                        report["b1"] = {{"mean", b.mean}, {"sd", b.sd}};
                    } else if (baseline == "b2") {
                        record("b2", baseline_b2(nets, measure, gold, cfg.b2_reps, cfg.seed,
                                                 BaselineClassify::kAllFeatures, nullptr,
                                                 class_resolver));
                    } else if (baseline == "b3") {
                        record("b3",
                               baseline_b3(gold, measure_range(measure),
                                           measure_self_value(measure), cfg.b3_reps, cfg.seed));
                    } else if (baseline == "b4") {
                        record("b4", baseline_b4(features, gold, gold.class_labels().size(),
                                                 cfg.b4_reps, cfg.seed));
                    } else {
                        throw std::invalid_argument("unknown baseline: " + baseline);
                    }
                }
                return 0;
            });
            if (!cfg.baselines.empty())
                write_file(fs::path(cfg.out_dir) / "reports" / (stem + "_baseline_scores.csv"),
                           score_rows.str());
            write_file(fs::path(cfg.out_dir) / "reports" / (stem + ".json"),
                       report.dump(2) + "\n");
            result.observed_macro_f[{to_string(mode), to_string(measure)}] = observed;
        }
    }

    // Node-weight distributions and their fits.
    run_stage("powerfit", [&] {
        std::ostringstream summary;
        summary.precision(17);
        summary << "network,n,exponent,prefactor,adjusted_r2\n";
        for (const auto& [mode, nets] : by_mode) {
            for (const auto& net : nets) {
                std::vector<double> weights;
                for (const auto& v : net.graph.vertices()) weights.push_back(v.weight);
                std::string name = net.corpus_id + "_" + to_string(net.mode);
                write_file(fs::path(cfg.out_dir) / "powerfit" / (name + "_rank_weight.csv"),
                           rank_weight_csv(weights));
                if (weights.size() >= 3) {
                    PowerFit fit = powerlaw_fit(weights);
                    summary << name << ',' << weights.size() << ',' << fit.exponent << ','
                            << fit.prefactor << ',' << fit.adjusted_r2 << '\n';
                } else {
                    summary << name << ',' << weights.size() << ",,,\n";
                }
            }
        }
        write_file(fs::path(cfg.out_dir) / "powerfit" / "summary.csv", summary.str());
        return 0;
    });

    // Community overlap between the corpora, when edit histories exist.
    run_stage("jaccard", [&] {
        std::vector<std::pair<std::string, CommunityProfile>> profiles;
        for (const auto& loaded : corpora)
            if (!loaded.bundle.history.empty())
                profiles.emplace_back(loaded.bundle.corpus.id,
                                      CommunityProfile::from_history(loaded.bundle.corpus,
                                                                     loaded.bundle.history));
        if (profiles.size() >= 2) {
            NamedMatrix jaccard;
            for (const auto& [id, profile] : profiles) jaccard.ids.push_back(id);
            jaccard.values = DenseMatrix(profiles.size());
            for (std::size_t i = 0; i < profiles.size(); ++i)
                for (std::size_t j = 0; j < profiles.size(); ++j)
                    jaccard.values.at(i, j) =
                        fuzzy_jaccard(profiles[i].second, profiles[j].second);
            save_matrix(jaccard, (fs::path(cfg.out_dir) / "jaccard.csv").string());
        }
        return 0;
    });

    // Heat values from supplied closeness and the first measure's similarity.
    if (cfg.closeness_path && !cfg.measures.empty() && !by_mode.empty() &&
        !measure_is_distance(cfg.measures.front())) {
        run_stage("heat", [&] {
            NamedMatrix closeness = load_matrix(*cfg.closeness_path);
            const auto& nets = by_mode.begin()->second;
            if (nets.size() < 2) return 0;
            NamedMatrix sim = similarity_matrix(nets, cfg.measures.front(), class_resolver);
            std::map<std::string, std::size_t> close_index;
            for (std::size_t i = 0; i < closeness.ids.size(); ++i)
                close_index[closeness.ids[i]] = i;
            NamedMatrix heat;
            heat.ids = sim.ids;
            heat.values = DenseMatrix(sim.ids.size());
            for (std::size_t i = 0; i < sim.ids.size(); ++i) {
                for (std::size_t j = 0; j < sim.ids.size(); ++j) {
                    std::string a = nets[i].corpus_id, b = nets[j].corpus_id;
                    if (close_index.count(a) && close_index.count(b)) {
                        double c = closeness.values.at(close_index[a], close_index[b]);
                        heat.values.at(i, j) = heat_value(c, sim.values.at(i, j));
                    }
                }
            }
            save_matrix(heat, (fs::path(cfg.out_dir) / "heat.csv").string());
            return 0;
        });
    }

    return result;
}

}  // namespace topicnet
