#include "siht/recovery.hpp"

#include <cassert>
#include <string>

namespace siht {

namespace {

void check_dims(const MeasurementPhase& phase, std::size_t n)
{
    if (phase.cols() != n || static_cast<std::size_t>(phase.measurement.size()) != phase.rows())
        throw std::invalid_argument("dimension mismatch: phase is " +
                                    std::to_string(phase.rows()) + "x" +
                                    std::to_string(phase.cols()) + " with " +
                                    std::to_string(phase.measurement.size()) +
                                    " measurements, signal length " + std::to_string(n));
}

void check_start(const SparseSignal& x0, const std::optional<SparseSignal>& truth, std::size_t k,
                 const RecoveryOptions& options)
{
    if (k < 1 || k > x0.dimension())
        throw std::invalid_argument("recovery: need 1 <= K <= N");
    if (truth && truth->dimension() != x0.dimension())
        throw std::invalid_argument("recovery: truth and x0 have different lengths");
    if (options.stop_at_error && !truth)
        throw std::invalid_argument("recovery: stop_at_error requires ground truth");
}

// Phi * x using only the nonzero columns of x.
Vector sparse_product(const Matrix& phi, const Vector& x)
{
    Vector out = Vector::Zero(phi.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0)
            out.noalias() += x[i] * phi.col(i);
    return out;
}

class Tracer {
public:
    Tracer(const std::optional<SparseSignal>& truth, const RecoveryOptions& options)
        : truth_(truth), options_(options)
    {
    }

    void start(const SparseSignal& x0, RecoveryTrace& trace) const
    {
        if (truth_)
            trace.errors.push_back(l2_error(x0.values(), truth_->values()));
    }

    // Returns true when the run should stop early.
    bool record(const SparseSignal& x, const MeasurementPhase& phase, RecoveryTrace& trace) const
    {
        trace.residual_norms.push_back(residual(phase, x.values()).norm());
        ++trace.iterations;
        if (!truth_)
            return false;
        trace.errors.push_back(l2_error(x.values(), truth_->values()));
        return options_.stop_at_error && trace.errors.back() <= *options_.stop_at_error;
    }

private:
    const std::optional<SparseSignal>& truth_;
    const RecoveryOptions& options_;
};

}  // namespace

double RecoveryTrace::final_error() const
{
    if (errors.empty())
        throw std::logic_error("RecoveryTrace: no ground truth was supplied");
    return errors.back();
}

Vector residual(const MeasurementPhase& phase, const Vector& x)
{
    check_dims(phase, static_cast<std::size_t>(x.size()));
    return phase.measurement - sparse_product(phase.matrix, x);
}

SparseSignal iht_step(const SparseSignal& x_prev, const MeasurementPhase& phase, std::size_t k)
{
    const Vector r = residual(phase, x_prev.values());
    Vector proxy = x_prev.values();
    proxy.noalias() += phase.matrix.transpose() * r;
    SparseSignal next(hard_threshold(proxy, k), k);
    assert(next.nonzeros() <= k);
    return next;
}

RecoveryTrace run_offline_iht(const MeasurementPhase& phase, std::size_t k, std::size_t iterations,
                              const SparseSignal& x0, const std::optional<SparseSignal>& truth,
                              const RecoveryOptions& options)
{
    if (iterations < 1)
        throw std::invalid_argument("run_offline_iht: T must be >= 1");
    check_start(x0, truth, k, options);
    check_dims(phase, x0.dimension());

    RecoveryTrace trace;
    const Tracer tracer(truth, options);
    tracer.start(x0, trace);
    SparseSignal x = x0;
    for (std::size_t t = 0; t < iterations; ++t) {
        x = iht_step(x, phase, k);
        if (tracer.record(x, phase, trace))
            break;
    }
    trace.final_estimate = std::move(x);
    return trace;
}

RecoveryTrace run_siht(const PhaseSchedule& schedule, const PhaseStream& phases, std::size_t k,
                       const SparseSignal& x0, const std::optional<SparseSignal>& truth,
                       const RecoveryOptions& options)
{
    check_start(x0, truth, k, options);

    RecoveryTrace trace;
    const Tracer tracer(truth, options);
    tracer.start(x0, trace);
    SparseSignal x = x0;
    const auto& durations = schedule.durations();
    for (std::size_t j = 0; j < durations.size(); ++j) {
        std::optional<MeasurementPhase> phase = phases();
        if (!phase)
            throw ProtocolError("run_siht: phase stream exhausted after " + std::to_string(j) +
                                " of " + std::to_string(durations.size()) + " phases");
        check_dims(*phase, x0.dimension());
        for (std::size_t t = 0; t < durations[j]; ++t) {
            x = iht_step(x, *phase, k);
            if (tracer.record(x, *phase, trace)) {
                trace.final_estimate = std::move(x);
                return trace;
            }
        }
    }
    trace.final_estimate = std::move(x);
    return trace;
}

PhaseStream stream_from(const std::vector<MeasurementPhase>& phases)
{
    return [&phases, next = std::size_t{0}]() mutable -> std::optional<MeasurementPhase> {
        if (next >= phases.size())
            return std::nullopt;
        return phases[next++];
    };
}

}  // namespace siht
