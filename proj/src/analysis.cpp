#include "topicnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topicnet/stats.hpp"

namespace topicnet {

PowerFit powerlaw_fit(const std::vector<double>& weights) {
    if (weights.size() < 3)
        throw std::invalid_argument("powerlaw_fit: need at least three values");
    for (double w : weights)
        if (w <= 0.0) throw std::invalid_argument("powerlaw_fit: values must be positive");

    std::vector<double> sorted = weights;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    std::vector<double> log_rank(sorted.size()), log_weight(sorted.size());
    for (std::size_t r = 0; r < sorted.size(); ++r) {
        log_rank[r] = std::log(static_cast<double>(r + 1));
        log_weight[r] = std::log(sorted[r]);
    }
    LinearFit fit = ols(log_rank, log_weight);

    PowerFit out;
    out.exponent = -fit.slope;
    out.prefactor = std::exp(fit.intercept);
    if (!fit.r2_defined) {
        out.adjusted_r2 = 0.0;
    } else {
        double n = static_cast<double>(sorted.size());
        out.adjusted_r2 = 1.0 - (1.0 - fit.r2) * (n - 1.0) / (n - 2.0);
    }
    return out;
}

std::string rank_weight_csv(std::vector<double> weights) {
    std::sort(weights.begin(), weights.end(), std::greater<>());
    std::ostringstream out;
    out.precision(17);
    out << "rank,weight\n";
    for (std::size_t r = 0; r < weights.size(); ++r)
        out << (r + 1) << ',' << weights[r] << '\n';
    return out.str();
}

CommunityProfile CommunityProfile::from_history(const Corpus& c, const EditHistory& h) {
    CommunityProfile profile;
    double total = 0.0;
    for (const auto& text : c.texts)
        for (const auto& author : h.active_authors(text.id)) {
            double act = h.activity(author, text.id);
            profile.share[author] += act;
            total += act;
        }
    if (total > 0.0)
        for (auto& [author, share] : profile.share) share /= total;
    return profile;
}

double fuzzy_jaccard(const CommunityProfile& a, const CommunityProfile& b) {
    std::set<std::string> authors;
    for (const auto& [author, share] : a.share) authors.insert(author);
    for (const auto& [author, share] : b.share) authors.insert(author);

    double min_sum = 0.0, max_sum = 0.0;
    for (const auto& author : authors) {
        auto ia = a.share.find(author);
        auto ib = b.share.find(author);
        double sa = ia == a.share.end() ? 0.0 : ia->second;
        double sb = ib == b.share.end() ? 0.0 : ib->second;
        min_sum += std::min(sa, sb);
        max_sum += std::max(sa, sb);
    }
    return max_sum > 0.0 ? min_sum / max_sum : 0.0;
}

double heat_value(double closeness, double similarity) {
    if (closeness < 0.0 || closeness > 1.0 || similarity < 0.0 || similarity > 1.0)
        throw std::invalid_argument("heat_value: inputs must lie in [0, 1]");
    return -1.0 + closeness + similarity;
}

}  // namespace topicnet
