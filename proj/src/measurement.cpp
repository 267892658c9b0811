#include "siht/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "siht/random.hpp"

namespace siht {

PhaseSchedule PhaseSchedule::from_boundaries(std::vector<std::size_t> boundaries)
{
    if (boundaries.size() < 2)
        throw std::invalid_argument("PhaseSchedule: need at least two boundaries");
    if (boundaries.front() != 0)
        throw std::invalid_argument("PhaseSchedule: first boundary must be 0");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i] <= boundaries[i - 1])
            throw std::invalid_argument("PhaseSchedule: boundaries must be strictly increasing");

    PhaseSchedule s;
    s.boundaries_ = std::move(boundaries);
    const auto horizon = static_cast<double>(s.boundaries_.back());
    for (std::size_t i = 1; i < s.boundaries_.size(); ++i) {
        const std::size_t tau = s.boundaries_[i] - s.boundaries_[i - 1];
        s.durations_.push_back(tau);
        s.fractions_.push_back(static_cast<double>(tau) / horizon);
    }
    s.max_fraction_ = *std::max_element(s.fractions_.begin(), s.fractions_.end());
    return s;
}

PhaseSchedule PhaseSchedule::from_durations(const std::vector<std::size_t>& durations)
{
    std::vector<std::size_t> b{0};
    for (std::size_t tau : durations)
        b.push_back(b.back() + tau);
    return from_boundaries(std::move(b));
}

PhaseSchedule PhaseSchedule::per_step(std::size_t horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("per_step_schedule: T must be >= 1");
    std::vector<std::size_t> b(horizon + 1);
    std::iota(b.begin(), b.end(), std::size_t{0});
    return from_boundaries(std::move(b));
}

std::string_view to_string(Ensemble e) noexcept
{
    switch (e) {
    case Ensemble::gaussian: return "gaussian";
    case Ensemble::rademacher: return "rademacher";
    case Ensemble::uniform: return "uniform";
    case Ensemble::identity: return "identity";
    }
    return "unknown";
}

Ensemble parse_ensemble(std::string_view name)
{
    if (name == "gaussian") return Ensemble::gaussian;
    if (name == "rademacher") return Ensemble::rademacher;
    if (name == "uniform" || name == "uniform-symmetric") return Ensemble::uniform;
    if (name == "identity") return Ensemble::identity;
    throw std::invalid_argument("unknown ensemble '" + std::string(name) + "'");
}

MeasurementPhase observe(Matrix matrix, const SparseSignal& truth)
{
    if (static_cast<std::size_t>(matrix.cols()) != truth.dimension())
        throw std::invalid_argument("observe: matrix has " + std::to_string(matrix.cols()) +
                                    " columns, signal has length " +
                                    std::to_string(truth.dimension()));
    Vector y = matrix * truth.values();
    return MeasurementPhase{std::move(matrix), std::move(y)};
}

std::vector<std::size_t> draw_phase_sizes(std::size_t a, std::size_t b, std::size_t s,
                                          std::uint64_t seed)
{
    if (a < 1 || a > b)
        throw std::invalid_argument("draw_phase_sizes: need 1 <= a <= b");
    if (s < 1)
        throw std::invalid_argument("draw_phase_sizes: need s >= 1");
    Stream rng(seed);
    const std::uint64_t width = b - a + 1;
    std::vector<std::size_t> out(s);
    for (auto& m : out)
        m = a + static_cast<std::size_t>(rng.below(width));
    return out;
}

Matrix sample_matrix(EnsembleSpec spec, std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("sample_matrix: need M, N >= 1");
    const auto m = static_cast<Eigen::Index>(rows);
    const auto n = static_cast<Eigen::Index>(cols);

    if (spec.family == Ensemble::identity) {
        if (rows != cols)
            throw std::invalid_argument("sample_matrix: identity ensemble requires M == N");
        return Matrix::Identity(m, n);
    }

    Stream rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    Matrix phi(m, n);
    // Filled in storage (column-major) order.
    double* data = phi.data();
    const Eigen::Index count = m * n;
    switch (spec.family) {
    case Ensemble::gaussian:
        for (Eigen::Index i = 0; i < count; ++i)
            data[i] = scale * rng.normal();
        break;
    case Ensemble::rademacher:
        for (Eigen::Index i = 0; i < count; ++i)
            data[i] = scale * rng.sign();
        break;
    case Ensemble::uniform: {
        // Uniform on [-sqrt(3), sqrt(3)] has unit variance.
        const double half_width = std::sqrt(3.0);
        for (Eigen::Index i = 0; i < count; ++i)
            data[i] = scale * half_width * (2.0 * rng.uniform() - 1.0);
        break;
    }
    case Ensemble::identity:
        break;
    }
    return phi;
}

SparseSignal sample_signal(std::size_t dimension, std::size_t sparsity, std::uint64_t seed)
{
    if (sparsity < 1 || sparsity > dimension)
        throw std::invalid_argument("sample_signal: need 1 <= K <= N");
    Stream rng(seed);

    // Partial Fisher-Yates: the first K slots are a uniform K-subset.
    std::vector<std::size_t> perm(dimension);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < sparsity; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(dimension - i));
        std::swap(perm[i], perm[j]);
    }

    Vector x = Vector::Zero(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < sparsity; ++i) {
        double v = rng.normal();
        // A standard normal is zero with probability zero; keep the support exact anyway.
        while (v == 0.0)
            v = rng.normal();
        x[static_cast<Eigen::Index>(perm[i])] = v;
    }
    return SparseSignal(std::move(x), sparsity);
}

}  // namespace siht
