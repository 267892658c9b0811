#ifndef SIHT_MEASUREMENT_HPP
#define SIHT_MEASUREMENT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "siht/sparse.hpp"

namespace siht {

// Phase boundaries 0 = t_0 < t_1 < ... < t_s = T. Phase j (1-based) covers
// iterations t_{j-1}+1 .. t_j and has duration tau_j and fraction p_j = tau_j/T.
class PhaseSchedule {
public:
    // Throws std::invalid_argument unless boundaries is strictly increasing,
    // starts at 0 and has at least two entries.
    static PhaseSchedule from_boundaries(std::vector<std::size_t> boundaries);
    static PhaseSchedule from_durations(const std::vector<std::size_t>& durations);
    // s = T phases of length one.
    static PhaseSchedule per_step(std::size_t horizon);

    const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
    const std::vector<std::size_t>& durations() const noexcept { return durations_; }
    const std::vector<double>& fractions() const noexcept { return fractions_; }
    std::size_t horizon() const noexcept { return boundaries_.back(); }
    std::size_t phase_count() const noexcept { return durations_.size(); }
    // p-bar = max_j p_j
    double max_fraction() const noexcept { return max_fraction_; }

private:
    std::vector<std::size_t> boundaries_;
    std::vector<std::size_t> durations_;
    std::vector<double> fractions_;
    double max_fraction_ = 0.0;
};

// Entry distributions for A in Phi = A / sqrt(M). Every family has zero mean
// and unit variance. The ensemble's sub-Gaussian parameter only enters the
// theory through an unspecified constant, so it is not represented here.
// `identity` is a deterministic test ensemble (Phi = I, requires M == N).
enum class Ensemble { gaussian, rademacher, uniform, identity };

struct EnsembleSpec {
    Ensemble family = Ensemble::gaussian;
};

std::string_view to_string(Ensemble e) noexcept;
// Accepts "gaussian", "rademacher", "uniform" (or "uniform-symmetric"), "identity".
Ensemble parse_ensemble(std::string_view name);

// One phase's measurement matrix Phi_j (M_j x N) and noiseless y_j = Phi_j x.
struct MeasurementPhase {
    Matrix matrix;
    Vector measurement;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
};

// Builds a phase with y = Phi * truth. Throws on dimension mismatch.
MeasurementPhase observe(Matrix matrix, const SparseSignal& truth);

// s independent draws, uniform on {a, ..., b}.
std::vector<std::size_t> draw_phase_sizes(std::size_t a, std::size_t b, std::size_t s,
                                          std::uint64_t seed);

// M x N matrix with unit-variance i.i.d. entries from the family, divided by sqrt(M).
Matrix sample_matrix(EnsembleSpec spec, std::size_t rows, std::size_t cols, std::uint64_t seed);

// Support uniform over all K-subsets of [0, N), nonzeros i.i.d. N(0, 1).
SparseSignal sample_signal(std::size_t dimension, std::size_t sparsity, std::uint64_t seed);

}  // namespace siht

#endif  // SIHT_MEASUREMENT_HPP
