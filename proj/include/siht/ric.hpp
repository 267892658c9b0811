#ifndef SIHT_RIC_HPP
#define SIHT_RIC_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "siht/measurement.hpp"
#include "siht/sparse.hpp"

namespace siht {

// Brute-force restricted isometry constants for small matrices. Exists to
// give exact reference values for the contraction inequalities; the
// enumeration is exponential and refuses to run past a subset cap.

inline constexpr std::size_t default_subset_cap = 1'000'000;

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// Sweeps stop once the off-diagonal Frobenius norm is below 1e-12 (or
// after 100 sweeps). Throws std::invalid_argument if |G - G^T| > 1e-12.
Vector symmetric_eigenvalues(const Matrix& g);

// Largest absolute eigenvalue of a symmetric matrix, i.e. its 2->2 norm.
double operator_norm_sym(const Matrix& g);

struct RicResult {
    std::size_t order = 0;
    double value = 0.0;
    IndexSet witness;
};

// delta_R(Phi) = max over |S| = R of ||Phi_S^T Phi_S - I||. Sets of size
// below R never give a larger value (Cauchy interlacing), so only size-R
// subsets are enumerated. Ties keep the lexicographically first subset.
// Throws std::invalid_argument if C(N, R) exceeds subset_cap.
RicResult ric(const Matrix& phi, std::size_t order, std::size_t subset_cap = default_subset_cap);

// ||Phi_S^T Phi_S - I|| for one column subset.
double gram_deviation(const Matrix& phi, const IndexSet& subset);

// Number of R-subsets, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t r);

struct ContractionCheck {
    double ratio = 0.0;      // ||x^t - x|| / ||x^{t-1} - x||, 0 when the denominator vanishes
    double bound = 0.0;      // sqrt(3) * delta_3K(Phi)
    double delta = 0.0;      // delta_3K(Phi)
    double prev_error = 0.0;
    double next_error = 0.0;
    bool holds = false;
};

inline constexpr double contraction_tolerance = 1e-9;
inline constexpr double vanishing_error = 1e-12;

// One IHT step from x_prev against (Phi, Phi * truth), checked against
// ||x^t - x|| <= sqrt(3) delta_3K ||x^{t-1} - x||. Pass `delta_3k` to reuse a
// previously enumerated constant. Requires 3K <= N.
ContractionCheck verify_contraction(const Matrix& phi, const SparseSignal& truth,
                                    const SparseSignal& x_prev, std::size_t k,
                                    std::optional<double> delta_3k = std::nullopt,
                                    std::size_t subset_cap = default_subset_cap);

struct ProductBoundCheck {
    std::vector<std::size_t> boundaries;  // t_1 .. t_s
    std::vector<double> lhs;              // ||x^{t_i} - x||
    std::vector<double> rhs;              // 3^{t_i/2} prod_{j<=i} delta_j^{tau_j} ||x^0 - x||
    std::vector<double> deltas;           // delta_3K(Phi_j)
    bool holds = false;
};

// Runs SIHT over the given per-phase matrices and evaluates the product
// bound at every phase boundary (rhs accumulated in log space).
ProductBoundCheck product_contraction_bound(const std::vector<Matrix>& matrices,
                                            const PhaseSchedule& schedule, std::size_t k,
                                            const SparseSignal& truth, const SparseSignal& x0,
                                            std::size_t subset_cap = default_subset_cap);

}  // namespace siht

#endif  // SIHT_RIC_HPP
