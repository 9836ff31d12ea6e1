#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace topicnet {

double mean(const std::vector<double>& values);
double median(std::vector<double> values);

// Population moments. Zero-variance samples yield 0 for all three, so that
// constant feature distributions compare as equal.
double population_sd(const std::vector<double>& values);
double skewness(const std::vector<double>& values);
double excess_kurtosis(const std::vector<double>& values);

// (median, mean, sd, skewness, kurtosis) of a sample, in that order.
std::array<double, 5> five_point_summary(const std::vector<double>& values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool r2_defined = true;  // false when the response has zero variance
};

// Ordinary least squares of y against x.
LinearFit ols(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace topicnet
