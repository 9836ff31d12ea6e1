#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topicnet/analysis.hpp"
#include "topicnet/graph_io.hpp"
#include "topicnet/induction.hpp"
#include "topicnet/learning.hpp"
#include "topicnet/pipeline.hpp"
#include "topicnet/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace topicnet;

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

InductionConfig make_induction_config(const CorpusBundle& bundle, int level, std::size_t m_bot,
                                      double p, const std::string& reference_path) {
    InductionConfig cfg;
    cfg.level = level;
    cfg.m_bot = m_bot;
    cfg.p = p;
    if (!reference_path.empty())
        cfg.reference = ReferenceStats::load(reference_path);
    else if (!bundle.history.empty())
        cfg.reference = reference_stats(bundle.corpus, bundle.history);
    return cfg;
}

std::vector<TopicNetwork> load_networks(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<TopicNetwork> nets;
    for (const auto& path : paths) nets.push_back(load_topic_network(path));
    if (nets.size() < 2) throw std::runtime_error("need at least two networks in " + dir);
    return nets;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiplex topic network induction, comparison and classification"};
    app.require_subcommand(1);

    // ingest: corpus JSON -> text/author layer JSON + reference stats
    auto* ingest = app.add_subcommand("ingest", "Build the text and author layers of a corpus");
    std::string ingest_corpus, ingest_out = ".";
    ingest->add_option("--corpus", ingest_corpus, "corpus JSON file")->required();
    ingest->add_option("--out", ingest_out, "output directory");
    ingest->callback([&]() {
        CorpusBundle bundle = CorpusBundle::load(ingest_corpus);
        fs::create_directories(ingest_out);
        save_graph(build_text_layer(bundle.corpus),
                   (fs::path(ingest_out) / "text_layer.json").string());
        json stats;
        if (!bundle.history.empty()) {
            save_graph(build_author_layer(bundle.corpus, bundle.history),
                       (fs::path(ingest_out) / "author_layer.json").string());
            ReferenceStats ref = reference_stats(bundle.corpus, bundle.history);
            stats = {{"mean_activity", ref.mean_activity},
                     {"mean_author_count", ref.mean_author_count},
                     {"mean_coauthorship", ref.mean_coauthorship}};
        } else {
            stats = {{"texts", bundle.corpus.texts.size()}};
        }
        write_text((fs::path(ingest_out) / "stats.json").string(), stats.dump(2) + "\n");
        std::cout << "ingested " << bundle.corpus.texts.size() << " texts\n";
    });

    // induce: corpus + scheme + lexicon -> topic network JSON / DOT
    auto* induce = app.add_subcommand("induce", "Derive a topic network from a corpus");
    std::string induce_corpus, induce_scheme, induce_lexicon, induce_mode = "ttn";
    std::string induce_out = "network.json", induce_reference;
    int induce_level = 2;
    std::size_t induce_mbot = 5;
    double induce_p = 2.0;
    bool induce_undirected = false, induce_dot = false;
    induce->add_option("--corpus", induce_corpus)->required();
    induce->add_option("--scheme", induce_scheme)->required();
    induce->add_option("--lexicon", induce_lexicon)->required();
    induce->add_option("--mode", induce_mode, "ttn | atn | wtn");
    induce->add_option("--level", induce_level, "scheme level (2 or 3)");
    induce->add_option("--m-bot", induce_mbot, "membership values kept per text");
    induce->add_option("--p", induce_p, "activity reward/penalty factor");
    induce->add_option("--reference-stats", induce_reference, "reference stats JSON");
    induce->add_option("--out", induce_out, "output file");
    induce->add_flag("--undirected", induce_undirected, "derive the undirected network");
    induce->add_flag("--dot", induce_dot, "also write a .dot file next to the output");
    induce->callback([&]() {
        CorpusBundle bundle = CorpusBundle::load(induce_corpus);
        TopicScheme scheme = TopicScheme::load(induce_scheme);
        LexiconClassifier classifier = LexiconClassifier::load(induce_lexicon);
        DefinitionalSetting setting{&scheme, &classifier, &bundle.corpus, &bundle.history};
        InductionConfig cfg = make_induction_config(bundle, induce_level, induce_mbot, induce_p,
                                                    induce_reference);
        TopicNetwork ttn = induce_ttn(setting, cfg);
        TopicNetwork net;
        switch (topic_network_mode_from_string(induce_mode)) {
            case TopicNetworkMode::kTtn: net = std::move(ttn); break;
            case TopicNetworkMode::kAtn: net = induce_atn(setting, ttn, cfg); break;
            case TopicNetworkMode::kWtn: net = induce_wtn(setting, ttn, cfg); break;
            case TopicNetworkMode::kGeneric:
                net = induce_generic(setting, cfg, module3_ttn_combinators());
                break;
        }
        if (induce_undirected) net = to_undirected(net);
        save_topic_network(net, induce_out);
        if (induce_dot) {
            fs::path dot = fs::path(induce_out).replace_extension(".dot");
            write_text(dot.string(), graph_to_dot(net.graph, net.corpus_id));
        }
        std::cout << "induced " << induce_mode << ": " << net.graph.vertex_count()
                  << " topics, " << net.graph.arc_count() << " links\n";
    });

    // similarity: directory of networks -> matrix CSV
    auto* similarity = app.add_subcommand("similarity", "Pairwise network similarity matrix");
    std::string sim_dir, sim_measure = "cosAV_w_phi1", sim_out = "matrix.csv", sim_scheme;
    similarity->add_option("--networks", sim_dir, "directory of network JSON files")->required();
    similarity->add_option("--measure", sim_measure, "measure id");
    similarity->add_option("--scheme", sim_scheme, "scheme JSON (class codes for tosi)");
    similarity->add_option("--out", sim_out, "output CSV");
    similarity->callback([&]() {
        std::vector<TopicNetwork> nets = load_networks(sim_dir);
        ClassResolver resolver;
        TopicScheme scheme;
        if (!sim_scheme.empty()) {
            scheme = TopicScheme::load(sim_scheme);
            resolver = [&scheme](const std::string& label) {
                return scheme.contains(label) ? scheme.parent_class(label) : label;
            };
        }
        NamedMatrix m = similarity_matrix(nets, measure_from_string(sim_measure), resolver);
        save_matrix(m, sim_out);
        std::cout << "wrote " << m.ids.size() << "x" << m.ids.size() << " matrix to " << sim_out
                  << "\n";
    });

    // classify: matrix + gold -> report JSON
    auto* classify = app.add_subcommand("classify", "Leave-one-out classification study");
    std::string cls_matrix, cls_gold, cls_mode = "all", cls_out = "report.json";
    std::uint64_t cls_seed = 1;
    classify->add_option("--matrix", cls_matrix, "feature matrix CSV")->required();
    classify->add_option("--gold", cls_gold, "gold standard TSV (id<TAB>class)")->required();
    classify->add_option("--mode", cls_mode, "all | opt | ext");
    classify->add_option("--seed", cls_seed);
    classify->add_option("--out", cls_out, "report JSON");
    classify->callback([&]() {
        FeatureMatrix features = FeatureMatrix::from_named(load_matrix(cls_matrix));
        GoldStandard gold = GoldStandard::load(cls_gold);
        json report;
        report["mode"] = cls_mode;
        report["seed"] = cls_seed;
        EvalReport all = classify_loo_all_features(features, gold);
        report["all"] = json::parse(all.to_json());
        double macro_f = all.macro_f;
        if (cls_mode == "opt" || cls_mode == "ext") {
            GeneticConfig genetic;
            genetic.seed = cls_seed;
            genetic.rounds = cls_mode == "ext" ? 500 : 50;
            genetic.minimize = cls_mode == "ext";
            GeneticResult search = genetic_search(features, gold, genetic);
            json selected = json::parse(search.report.to_json());
            selected["mask"] = search.mask;
            report[cls_mode] = selected;
            macro_f = search.report.macro_f;
        } else if (cls_mode != "all") {
            throw std::runtime_error("classify mode must be all, opt or ext");
        }
        write_text(cls_out, report.dump(2) + "\n");
        std::cout << "macro F = " << macro_f << "\n";
    });

    // baseline: randomization references
    auto* baseline = app.add_subcommand("baseline", "Randomization baselines");
    std::string base_kind, base_matrix, base_gold, base_networks, base_measure = "cosAV_w_phi1";
    std::string base_out = "baseline.json";
    std::size_t base_reps = 100, base_iterations = 100000;
    std::uint64_t base_seed = 1;
    baseline->add_option("--kind", base_kind, "b1 | b2 | b3 | b4")->required();
    baseline->add_option("--gold", base_gold, "gold standard TSV")->required();
    baseline->add_option("--matrix", base_matrix, "feature matrix CSV (b4)");
    baseline->add_option("--networks", base_networks, "network directory (b2)");
    baseline->add_option("--measure", base_measure, "measure id (b2/b3)");
    baseline->add_option("--reps", base_reps);
    baseline->add_option("--iterations", base_iterations, "iterations (b1)");
    baseline->add_option("--seed", base_seed);
    baseline->add_option("--out", base_out);
    baseline->callback([&]() {
        GoldStandard gold = GoldStandard::load(base_gold);
        BaselineResult result;
        if (base_kind == "b1") {
            result = baseline_b1(gold, base_iterations, base_seed);
        } else if (base_kind == "b2") {
            if (base_networks.empty()) throw std::runtime_error("b2 needs --networks");
            result = baseline_b2(load_networks(base_networks),
                                 measure_from_string(base_measure), gold, base_reps, base_seed);
        } else if (base_kind == "b3") {
            MeasureId m = measure_from_string(base_measure);
            result = baseline_b3(gold, measure_range(m), measure_self_value(m), base_reps,
                                 base_seed);
        } else if (base_kind == "b4") {
            if (base_matrix.empty()) throw std::runtime_error("b4 needs --matrix");
            FeatureMatrix features = FeatureMatrix::from_named(load_matrix(base_matrix));
            result = baseline_b4(features, gold, gold.class_labels().size(), base_reps,
                                 base_seed);
        } else {
            throw std::runtime_error("unknown baseline kind: " + base_kind);
        }
        json out{{"kind", base_kind}, {"mean", result.mean}, {"sd", result.sd},
                 {"reps", result.scores.size()}};
        write_text(base_out, out.dump(2) + "\n");
        std::cout << base_kind << " mean macro F = " << result.mean << " (sd " << result.sd
                  << ")\n";
    });

    // powerfit: node-weight distribution fit
    auto* powerfit = app.add_subcommand("powerfit", "Fit the node-weight distribution");
    std::string fit_network, fit_out;
    powerfit->add_option("--network", fit_network, "topic network JSON")->required();
    powerfit->add_option("--rank-weight-out", fit_out, "write the rank/weight table CSV");
    powerfit->callback([&]() {
        TopicNetwork net = load_topic_network(fit_network);
        std::vector<double> weights;
        for (const auto& v : net.graph.vertices()) weights.push_back(v.weight);
        PowerFit fit = powerlaw_fit(weights);
        if (!fit_out.empty()) write_text(fit_out, rank_weight_csv(weights));
        std::cout << "exponent = " << fit.exponent << ", prefactor = " << fit.prefactor
                  << ", adjusted R^2 = " << fit.adjusted_r2 << "\n";
    });

    // jaccard: community overlap between corpora
    auto* jaccard = app.add_subcommand("jaccard", "Activity-weighted community overlap");
    std::vector<std::string> jac_corpora;
    std::string jac_out = "jaccard.csv";
    jaccard->add_option("--corpus", jac_corpora, "corpus JSON files (repeatable)")
        ->required()
        ->expected(-2);
    jaccard->add_option("--out", jac_out);
    jaccard->callback([&]() {
        std::vector<std::pair<std::string, CommunityProfile>> profiles;
        for (const auto& path : jac_corpora) {
            CorpusBundle bundle = CorpusBundle::load(path);
            profiles.emplace_back(bundle.corpus.id, CommunityProfile::from_history(
                                                        bundle.corpus, bundle.history));
        }
        NamedMatrix m;
        for (const auto& [id, profile] : profiles) m.ids.push_back(id);
        m.values = DenseMatrix(profiles.size());
        for (std::size_t i = 0; i < profiles.size(); ++i)
            for (std::size_t j = 0; j < profiles.size(); ++j)
                m.values.at(i, j) = fuzzy_jaccard(profiles[i].second, profiles[j].second);
        save_matrix(m, jac_out);
        std::cout << "wrote community overlap for " << profiles.size() << " corpora\n";
    });

    // run: full pipeline from a config file
    auto* run = app.add_subcommand("run", "Run the full study from a config file");
    std::string run_config;
    run->add_option("config", run_config, "configuration file")->required();
    run->callback([&]() {
        PipelineResult result = run_pipeline(PipelineConfig::load(run_config));
        std::cout << "pipeline outputs in " << result.out_dir << "\n";
        for (const auto& [key, macro_f] : result.observed_macro_f)
            std::cout << key.first << " / " << key.second << ": macro F = " << macro_f << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
