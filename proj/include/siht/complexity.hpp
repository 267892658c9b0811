#ifndef SIHT_COMPLEXITY_HPP
#define SIHT_COMPLEXITY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "siht/measurement.hpp"

namespace siht {

// Dynamic sample complexity M_d = g_M^2 / (s * p_bar * a_M) of a phase
// sequence, with its ingredients.
struct ComplexityBreakdown {
    std::vector<double> fractions;    // p_j
    double p_bar = 0.0;               // max_j p_j
    double arithmetic_mean = 0.0;     // a_M = sum_j p_j M_j
    double geometric_mean = 0.0;      // g_M = prod_j M_j^{p_j}
    std::size_t phase_count = 0;      // s
    double dynamic_complexity = 0.0;  // M_d
};

ComplexityBreakdown dynamic_sample_complexity(const std::vector<std::size_t>& measurements,
                                              const PhaseSchedule& schedule);

// Same, from explicit fractions; they must be positive and sum to 1 within 1e-9.
ComplexityBreakdown dynamic_sample_complexity(const std::vector<std::size_t>& measurements,
                                              const std::vector<double>& fractions);

// C1 ln(6K) + C2 K ln(3Ne/K) + C3 ln(1/eps), C1 = C3 = 96/c~, C2 = 288/c~.
// eps must lie in (0, 1]; eps = 1 simply removes the last term.
double theorem_rhs(std::size_t k, std::size_t n, double epsilon, double c_tilde);

struct TheoremCheck {
    bool satisfied = false;
    double margin = 0.0;  // M_d - rhs
    double rhs = 0.0;
};

TheoremCheck satisfies_theorem(const ComplexityBreakdown& breakdown, std::size_t k, std::size_t n,
                               double epsilon, double c_tilde);

// 2 b^2 / (9 (a + b)), the lower bound on E[M_d] for p_j = 1/s and M_j
// uniform on {a..b}. Valid for 2 <= a <= b.
double expected_md_lower_bound(std::size_t a, std::size_t b);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

// Monte Carlo E[M_d] with p_j = 1/s and M_j ~ uniform{a..b}. Trial r uses
// the stream derive_seed(seed, r), so the result does not depend on
// workers; the mean is a pairwise sum in trial order.
MonteCarloEstimate estimate_expected_md(std::size_t a, std::size_t b, std::size_t s,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t workers = 1);

}  // namespace siht

#endif  // SIHT_COMPLEXITY_HPP
