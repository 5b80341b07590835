#pragma once
// Descriptive statistics and the two tests the analysis uses: paired t-test
// and Spearman rank correlation (average ranks for ties). Two-sided p-values
// come from a self-contained Student-t CDF built on the regularized
// incomplete beta function.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anchorbench/types.hpp"

namespace anchorbench {

struct StatsError : Error {
    using Error::Error;
};
struct ZeroVariance : StatsError {
    using StatsError::StatsError;
};
struct TooFewPairs : StatsError {
    using StatsError::StatsError;
};
struct ConstantInput : StatsError {
    using StatsError::StatsError;
};
struct LengthMismatch : StatsError {
    using StatsError::StatsError;
};
struct TooFew : StatsError {
    using StatsError::StatsError;
};

struct PairedSample {
    std::vector<std::pair<double, double>> pairs;
    std::string label_x;
    std::string label_y;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int dof = 1;
    double mean_diff = 0.0;
    bool significant_at_05 = false;
};

struct CorrelationResult {
    double rho = 0.0;
    double p_value = 1.0;
    int n = 0;
};

struct MeanSd {
    double mean = 0.0;
    std::optional<double> sd;  // absent when n < 2
};

double mean(std::span<const double> xs);                 // throws TooFew on empty input
double sample_sd(std::span<const double> xs);            // n-1 denominator; throws TooFew for n < 2
MeanSd mean_sd(std::span<const double> xs);

// Two-sided paired t-test on d = x - y with sample sd; dof = n - 1.
TestResult paired_t_test(const PairedSample& sample);

// Average ranks (ties share the mean rank), rho = Pearson on ranks, p from
// t = rho * sqrt((n-2) / (1-rho^2)) with n-2 dof; |rho| = 1 gives p = 0.
CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys);

std::vector<double> average_ranks(std::span<const double> xs);

// P(T <= t) for Student-t with dof degrees of freedom.
double student_t_cdf(double t, int dof);

// I_x(a, b), continued-fraction evaluation (Lentz).
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace anchorbench
