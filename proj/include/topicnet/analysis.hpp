#pragma once

#include <map>
#include <string>
#include <vector>

#include "topicnet/corpus.hpp"

namespace topicnet {

struct PowerFit {
    double exponent = 0.0;   // decay exponent of weight against rank
    double prefactor = 0.0;
    double adjusted_r2 = 0.0;
};

// Rank-value fit: weights sorted descending, log(weight) regressed on
// log(rank) by ordinary least squares. Needs at least three strictly positive
// values. A constant sample fits exponent 0 with adjusted R-squared 0.
PowerFit powerlaw_fit(const std::vector<double>& weights);

// Rank/weight table feeding the fit, as plot-ready CSV.
std::string rank_weight_csv(std::vector<double> weights);

// Author activity shares of one document collection; shares sum to 1.
struct CommunityProfile {
    std::map<std::string, double> share;

    static CommunityProfile from_history(const Corpus& c, const EditHistory& h);
};

// Activity-weighted community overlap: sum of per-author share minima over
// the sum of maxima. Empty profiles compare as 0.
double fuzzy_jaccard(const CommunityProfile& a, const CommunityProfile& b);

// Combined closeness/similarity heat value in [-1, 1].
double heat_value(double closeness, double similarity);

}  // namespace topicnet
