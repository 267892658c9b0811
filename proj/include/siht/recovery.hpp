#ifndef SIHT_RECOVERY_HPP
#define SIHT_RECOVERY_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "siht/measurement.hpp"
#include "siht/sparse.hpp"

namespace siht {

// Raised when a phase stream runs dry before the schedule is complete.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RecoveryTrace {
    // errors[t] = ||x^t - x||, t = 0..iterations; empty without ground truth.
    std::vector<double> errors;
    // ||y_j - Phi_j x^t|| against the phase active at step t, t = 1..iterations.
    std::vector<double> residual_norms;
    SparseSignal final_estimate;
    std::size_t iterations = 0;

    bool has_truth() const noexcept { return !errors.empty(); }
    double final_error() const;
    bool success(double threshold) const { return final_error() <= threshold; }
};

struct RecoveryOptions {
    // Stop as soon as the error against the ground truth drops to this
    // value. Off by default; requires truth.
    std::optional<double> stop_at_error;
};

// Yields the next phase, or std::nullopt when exhausted. Pulled exactly
// once per phase, at the phase boundary.
using PhaseStream = std::function<std::optional<MeasurementPhase>()>;

// y - Phi x
Vector residual(const MeasurementPhase& phase, const Vector& x);

// x^t = H_K(x^{t-1} + Phi^T (y - Phi x^{t-1})), unit step size.
SparseSignal iht_step(const SparseSignal& x_prev, const MeasurementPhase& phase, std::size_t k);

RecoveryTrace run_offline_iht(const MeasurementPhase& phase, std::size_t k, std::size_t iterations,
                              const SparseSignal& x0,
                              const std::optional<SparseSignal>& truth = std::nullopt,
                              const RecoveryOptions& options = {});

// Sequential IHT: for each phase of the schedule, receive (Phi_j, y_j) from
// the stream and run tau_j IHT steps against it.
RecoveryTrace run_siht(const PhaseSchedule& schedule, const PhaseStream& phases, std::size_t k,
                       const SparseSignal& x0,
                       const std::optional<SparseSignal>& truth = std::nullopt,
                       const RecoveryOptions& options = {});

// Convenience stream over an in-memory list of phases (used by tests and
// the Python bindings). The list must outlive the stream.
PhaseStream stream_from(const std::vector<MeasurementPhase>& phases);

}  // namespace siht

#endif  // SIHT_RECOVERY_HPP
