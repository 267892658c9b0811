#include "siht/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "siht/parallel.hpp"
#include "siht/random.hpp"

namespace siht {

namespace {

// Fractions are w_j / total. Keeping integer durations as weights lets the
// degenerate cases (s = 1, equal M_j and equal tau_j) come out exactly.
ComplexityBreakdown breakdown_from_weights(const std::vector<std::size_t>& measurements,
                                           const std::vector<double>& weights, double total)
{
    if (measurements.size() != weights.size())
        throw std::invalid_argument("dynamic_sample_complexity: " +
                                    std::to_string(measurements.size()) +
                                    " measurement counts for " + std::to_string(weights.size()) +
                                    " phases");
    if (measurements.empty())
        throw std::invalid_argument("dynamic_sample_complexity: no phases");
    if (std::find(measurements.begin(), measurements.end(), std::size_t{0}) != measurements.end())
        throw std::invalid_argument("dynamic_sample_complexity: zero measurement count");

    ComplexityBreakdown out;
    out.phase_count = measurements.size();
    out.fractions.reserve(weights.size());
    double weighted_sum = 0.0;
    double weighted_log = 0.0;
    double max_weight = 0.0;
    std::size_t common = 0;
    bool all_equal = true;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double m = static_cast<double>(measurements[j]);
        out.fractions.push_back(weights[j] / total);
        weighted_sum += weights[j] * m;
        weighted_log += weights[j] * std::log(m);
        max_weight = std::max(max_weight, weights[j]);
        if (weights[j] > 0.0) {
            if (common == 0)
                common = measurements[j];
            else if (measurements[j] != common)
                all_equal = false;
        }
    }
    out.p_bar = max_weight / total;
    // AM-GM equality case, exact.
    out.arithmetic_mean = all_equal ? static_cast<double>(common) : weighted_sum / total;
    out.geometric_mean = all_equal ? static_cast<double>(common) : std::exp(weighted_log / total);
    const double s_pbar = static_cast<double>(out.phase_count) * max_weight / total;
    out.dynamic_complexity =
        out.geometric_mean * out.geometric_mean / (s_pbar * out.arithmetic_mean);
    return out;
}

}  // namespace

ComplexityBreakdown dynamic_sample_complexity(const std::vector<std::size_t>& measurements,
                                              const PhaseSchedule& schedule)
{
    const auto& tau = schedule.durations();
    std::vector<double> weights(tau.begin(), tau.end());
    return breakdown_from_weights(measurements, weights,
                                  static_cast<double>(schedule.horizon()));
}

ComplexityBreakdown dynamic_sample_complexity(const std::vector<std::size_t>& measurements,
                                              const std::vector<double>& fractions)
{
    double total = 0.0;
    for (double p : fractions) {
        if (!(p > 0.0))
            throw std::invalid_argument("dynamic_sample_complexity: fractions must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("dynamic_sample_complexity: fractions sum to " +
                                    std::to_string(total) + ", expected 1");
    // Equal fractions are exactly 1/s; use unit weights so s * p_bar == 1.
    if (std::adjacent_find(fractions.begin(), fractions.end(), std::not_equal_to<>()) ==
        fractions.end())
        return breakdown_from_weights(measurements, std::vector<double>(fractions.size(), 1.0),
                                      static_cast<double>(fractions.size()));
    return breakdown_from_weights(measurements, fractions, total);
}

double theorem_rhs(std::size_t k, std::size_t n, double epsilon, double c_tilde)
{
    if (!(c_tilde > 0.0))
        throw std::invalid_argument("theorem_rhs: c_tilde must be positive");
    if (k < 1 || k > n)
        throw std::invalid_argument("theorem_rhs: need 1 <= K <= N");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("theorem_rhs: epsilon must lie in (0, 1]");
    const double c1 = 96.0 / c_tilde;
    const double c2 = 288.0 / c_tilde;
    const double c3 = c1;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    return c1 * std::log(6.0 * kd) + c2 * kd * std::log(3.0 * nd * std::numbers::e / kd) +
           c3 * std::log(1.0 / epsilon);
}

TheoremCheck satisfies_theorem(const ComplexityBreakdown& breakdown, std::size_t k, std::size_t n,
                               double epsilon, double c_tilde)
{
    TheoremCheck out;
    out.rhs = theorem_rhs(k, n, epsilon, c_tilde);
    out.margin = breakdown.dynamic_complexity - out.rhs;
    out.satisfied = breakdown.dynamic_complexity >= out.rhs;
    return out;
}

double expected_md_lower_bound(std::size_t a, std::size_t b)
{
    if (a < 2 || a > b)
        throw std::invalid_argument("expected_md_lower_bound: need 2 <= a <= b");
    const double bd = static_cast<double>(b);
    return 2.0 * bd * bd / (9.0 * static_cast<double>(a + b));
}

MonteCarloEstimate estimate_expected_md(std::size_t a, std::size_t b, std::size_t s,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t workers)
{
    if (a < 2 || a > b)
        throw std::invalid_argument("estimate_expected_md: need 2 <= a <= b");
    if (s < 1 || trials < 1)
        throw std::invalid_argument("estimate_expected_md: need s >= 1 and trials >= 1");

    const PhaseSchedule schedule = PhaseSchedule::per_step(s);
    std::vector<double> samples(trials);
    parallel_for(trials, resolve_workers(workers), [&](std::size_t r) {
        const auto sizes = draw_phase_sizes(a, b, s, derive_seed({seed, r}));
        samples[r] = dynamic_sample_complexity(sizes, schedule).dynamic_complexity;
    });

    MonteCarloEstimate out;
    out.trials = trials;
    out.mean = pairwise_sum(samples) / static_cast<double>(trials);
    if (trials > 1) {
        std::vector<double> sq(trials);
        std::transform(samples.begin(), samples.end(), sq.begin(),
                       [m = out.mean](double v) { return (v - m) * (v - m); });
        const double var = pairwise_sum(sq) / static_cast<double>(trials - 1);
        out.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    return out;
}

}  // namespace siht
