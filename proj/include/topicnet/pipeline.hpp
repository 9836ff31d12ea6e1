#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicnet/induction.hpp"
#include "topicnet/learning.hpp"
#include "topicnet/similarity.hpp"

namespace topicnet {

// Line-oriented key = value configuration; '#' starts a comment, repeatable
// keys (corpus, measure, mode) accumulate.
struct PipelineConfig {
    std::string scheme_path;
    std::string lexicon_path;
    std::vector<std::pair<std::string, std::string>> corpora;  // (class label, path)
    std::vector<MeasureId> measures;
    std::vector<TopicNetworkMode> modes;  // networks induced per corpus
    int level = 2;
    std::size_t m_bot = 5;
    double p = 2.0;
    std::string classify_mode = "ext";  // all | opt | ext
    std::uint64_t seed = 1;
    std::size_t b1_iterations = 100000;
    std::size_t b2_reps = 100;
    std::size_t b3_reps = 100;
    std::size_t b4_reps = 100;
    std::vector<std::string> baselines;  // subset of b1..b4
    std::optional<std::string> reference_stats_path;
    std::optional<std::string> closeness_path;  // matrix CSV keyed by corpus id
    std::string out_dir = "out";

    static PipelineConfig parse(const std::string& text);
    static PipelineConfig load(const std::string& path);
};

struct PipelineResult {
    std::string out_dir;
    // (mode, measure) -> observed macro F of the configured classify step
    std::map<std::pair<std::string, std::string>, double> observed_macro_f;
};

// Full study over the configured corpora: ingest, classify, induce the
// requested network modes, build similarity matrices, run the requested
// baselines and the classification step, fit the node-weight distributions
// and report community overlaps. All outputs land under out_dir; reruns with
// the same configuration and seed are byte-identical.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace topicnet
