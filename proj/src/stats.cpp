#include "topicnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topicnet {

double mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

// Central moment of given order.
double central_moment(const std::vector<double>& values, double mu, int order) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += std::pow(v - mu, order);
    return sum / static_cast<double>(values.size());
}

}  // namespace

double population_sd(const std::vector<double>& values) {
    double m2 = central_moment(values, mean(values), 2);
    return m2 > 0.0 ? std::sqrt(m2) : 0.0;
}

double skewness(const std::vector<double>& values) {
    double mu = mean(values);
    double m2 = central_moment(values, mu, 2);
    if (m2 <= 0.0) return 0.0;
    return central_moment(values, mu, 3) / std::pow(m2, 1.5);
}

double excess_kurtosis(const std::vector<double>& values) {
    double mu = mean(values);
    double m2 = central_moment(values, mu, 2);
    if (m2 <= 0.0) return 0.0;
    return central_moment(values, mu, 4) / (m2 * m2) - 3.0;
}

std::array<double, 5> five_point_summary(const std::vector<double>& values) {
    return {median(values), mean(values), population_sd(values), skewness(values),
            excess_kurtosis(values)};
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols: need at least two paired samples");
    double mx = mean(x);
    double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("ols: predictor has zero variance");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {
        fit.r2 = 0.0;
        fit.r2_defined = false;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double e = y[i] - (fit.intercept + fit.slope * x[i]);
            ss_res += e * e;
        }
        fit.r2 = 1.0 - ss_res / syy;
    }
    return fit;
}

}  // namespace topicnet
