#include "anchorbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace anchorbench {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw TooFew("mean: empty input");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) throw TooFew("sample_sd: need at least 2 values");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

MeanSd mean_sd(std::span<const double> xs) {
    MeanSd out;
    out.mean = mean(xs);
    if (xs.size() >= 2) out.sd = sample_sd(xs);
    return out;
}

namespace {

double log_gamma(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta (Numerical-Recipes betacf form,
// modified Lentz evaluation).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fastest for x < (a+1)/(a+b+2);
    // otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int dof) {
    if (dof < 1) throw StatsError("student_t_cdf: dof must be >= 1");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double v = static_cast<double>(dof);
    const double x = v / (v + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(v / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

namespace {

double two_sided_p_from_t(double t, int dof) {
    const double v = static_cast<double>(dof);
    // 2 * P(T >= |t|) collapses to one incomplete-beta evaluation.
    const double x = v / (v + t * t);
    return regularized_incomplete_beta(v / 2.0, 0.5, x);
}

}  // namespace

TestResult paired_t_test(const PairedSample& sample) {
    const std::size_t n = sample.pairs.size();
    if (n < 2) throw TooFewPairs("paired_t_test: need at least 2 pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = sample.pairs[i].first - sample.pairs[i].second;
    for (double v : d) {
        if (!std::isfinite(v)) throw StatsError("paired_t_test: non-finite difference");
    }
    const double md = mean(d);
    const double sd = sample_sd(d);
    if (sd == 0.0) throw ZeroVariance("paired_t_test: all differences identical");

    TestResult result;
    result.mean_diff = md;
    result.dof = static_cast<int>(n) - 1;
    result.statistic = md / (sd / std::sqrt(static_cast<double>(n)));
    result.p_value = two_sided_p_from_t(result.statistic, result.dof);
    result.significant_at_05 = result.p_value < 0.05;
    return result;
}

std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        // items order[i..j] tie: all get the mean of ranks i+1 .. j+1
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw LengthMismatch("spearman: input lengths differ");
    const std::size_t n = xs.size();
    if (n < 3) throw TooFewPairs("spearman: need at least 3 observations");
    auto is_constant = [](std::span<const double> v) {
        for (double x : v) {
            if (x != v[0]) return false;
        }
        return true;
    };
    if (is_constant(xs) || is_constant(ys)) {
        throw ConstantInput("spearman: an input has a single distinct value");
    }

    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    CorrelationResult result;
    result.n = static_cast<int>(n);
    result.rho = sxy / std::sqrt(sxx * syy);
    // guard tiny overshoots from the division
    result.rho = std::clamp(result.rho, -1.0, 1.0);
    if (std::fabs(result.rho) == 1.0) {
        result.p_value = 0.0;
    } else {
        const double t = result.rho * std::sqrt((static_cast<double>(n) - 2.0) /
                                                (1.0 - result.rho * result.rho));
        result.p_value = two_sided_p_from_t(t, static_cast<int>(n) - 2);
    }
    return result;
}

}  // namespace anchorbench
