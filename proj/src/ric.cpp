#include "siht/ric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "siht/recovery.hpp"

namespace siht {

namespace {

constexpr double symmetry_tolerance = 1e-12;
constexpr double off_diagonal_threshold = 1e-12;
constexpr int max_sweeps = 100;

double off_diagonal_norm(const Matrix& a)
{
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j)
                s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Deviation of the principal submatrix gram[S, S] from the identity.
double deviation_from_gram(const Matrix& gram, const std::vector<std::size_t>& subset)
{
    const auto r = static_cast<Eigen::Index>(subset.size());
    Matrix sub(r, r);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            sub(i, j) = gram(static_cast<Eigen::Index>(subset[i]),
                             static_cast<Eigen::Index>(subset[j])) -
                        (i == j ? 1.0 : 0.0);
    return operator_norm_sym(sub);
}

// Advances `c` to the next R-subset of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n)
{
    const std::size_t r = c.size();
    std::size_t i = r;
    while (i > 0) {
        --i;
        if (c[i] < n - r + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < r; ++j)
                c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Vector symmetric_eigenvalues(const Matrix& g)
{
    if (g.rows() != g.cols())
        throw std::invalid_argument("symmetric_eigenvalues: matrix is not square");
    const Eigen::Index n = g.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i)
            if (std::abs(g(i, j) - g(j, i)) > symmetry_tolerance)
                throw std::invalid_argument("symmetric_eigenvalues: matrix is not symmetric");

    Matrix a = 0.5 * (g + g.transpose());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) < off_diagonal_threshold)
            break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                // Rotation angle zeroing a(p, q): tan(2 theta) = 2 apq / (aqq - app).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    Vector eig = a.diagonal();
    std::sort(eig.begin(), eig.end());
    return eig;
}

double operator_norm_sym(const Matrix& g)
{
    if (g.size() == 0)
        return 0.0;
    return symmetric_eigenvalues(g).cwiseAbs().maxCoeff();
}

std::size_t binomial(std::size_t n, std::size_t r)
{
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    std::size_t out = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        // out * (n - r + i) / i stays integral at every step.
        const std::size_t num = n - r + i;
        if (out > std::numeric_limits<std::size_t>::max() / num)
            return std::numeric_limits<std::size_t>::max();
        out = out * num / i;
    }
    return out;
}

double gram_deviation(const Matrix& phi, const IndexSet& subset)
{
    if (!subset.empty() && subset.indices().back() >= static_cast<std::size_t>(phi.cols()))
        throw std::invalid_argument("gram_deviation: subset index out of range");
    Matrix cols(phi.rows(), static_cast<Eigen::Index>(subset.size()));
    Eigen::Index c = 0;
    for (std::size_t i : subset)
        cols.col(c++) = phi.col(static_cast<Eigen::Index>(i));
    Matrix dev = cols.transpose() * cols;
    dev.diagonal().array() -= 1.0;
    // The product is symmetric only up to rounding.
    dev = 0.5 * (dev + dev.transpose()).eval();
    return operator_norm_sym(dev);
}

RicResult ric(const Matrix& phi, std::size_t order, std::size_t subset_cap)
{
    const auto n = static_cast<std::size_t>(phi.cols());
    if (order < 1 || order > n)
        throw std::invalid_argument("ric: need 1 <= R <= N (R=" + std::to_string(order) +
                                    ", N=" + std::to_string(n) + ")");
    const std::size_t count = binomial(n, order);
    if (count > subset_cap)
        throw std::invalid_argument("ric: C(" + std::to_string(n) + ", " + std::to_string(order) +
                                    ") subsets exceed the enumeration cap of " +
                                    std::to_string(subset_cap));

    Matrix gram = phi.transpose() * phi;
    gram = 0.5 * (gram + gram.transpose()).eval();

    std::vector<std::size_t> subset(order);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    std::vector<std::size_t> best = subset;
    double best_value = -1.0;
    do {
        const double v = deviation_from_gram(gram, subset);
        if (v > best_value) {
            best_value = v;
            best = subset;
        }
    } while (next_combination(subset, n));

    return RicResult{order, best_value, IndexSet::from_indices(std::move(best), n)};
}

ContractionCheck verify_contraction(const Matrix& phi, const SparseSignal& truth,
                                    const SparseSignal& x_prev, std::size_t k,
                                    std::optional<double> delta_3k, std::size_t subset_cap)
{
    if (3 * k > static_cast<std::size_t>(phi.cols()))
        throw std::invalid_argument("verify_contraction: need 3K <= N");
    if (x_prev.nonzeros() > k)
        throw std::invalid_argument("verify_contraction: x_prev has more than K nonzeros");

    ContractionCheck out;
    out.delta = delta_3k ? *delta_3k : ric(phi, 3 * k, subset_cap).value;
    out.bound = std::sqrt(3.0) * out.delta;

    const MeasurementPhase phase = observe(phi, truth);
    const SparseSignal next = iht_step(x_prev, phase, k);
    out.prev_error = l2_error(x_prev.values(), truth.values());
    out.next_error = l2_error(next.values(), truth.values());
    if (out.prev_error < vanishing_error) {
        out.holds = true;
        return out;
    }
    out.ratio = out.next_error / out.prev_error;
    out.holds = out.ratio <= out.bound + contraction_tolerance;
    return out;
}

ProductBoundCheck product_contraction_bound(const std::vector<Matrix>& matrices,
                                            const PhaseSchedule& schedule, std::size_t k,
                                            const SparseSignal& truth, const SparseSignal& x0,
                                            std::size_t subset_cap)
{
    if (matrices.size() != schedule.phase_count())
        throw std::invalid_argument("product_contraction_bound: " +
                                    std::to_string(matrices.size()) + " matrices for " +
                                    std::to_string(schedule.phase_count()) + " phases");

    ProductBoundCheck out;
    std::vector<MeasurementPhase> phases;
    for (const Matrix& phi : matrices) {
        out.deltas.push_back(ric(phi, 3 * k, subset_cap).value);
        phases.push_back(observe(phi, truth));
    }

    const RecoveryTrace trace = run_siht(schedule, stream_from(phases), k, x0, truth);
    const double initial = trace.errors.front();

    // log rhs = (t_i / 2) ln 3 + sum_j tau_j ln delta_j + ln ||x^0 - x||
    double log_product = 0.0;
    out.holds = true;
    for (std::size_t i = 0; i < schedule.phase_count(); ++i) {
        const std::size_t t = schedule.boundaries()[i + 1];
        log_product += static_cast<double>(schedule.durations()[i]) * std::log(out.deltas[i]);
        const double log_rhs =
            0.5 * static_cast<double>(t) * std::log(3.0) + log_product + std::log(initial);
        out.boundaries.push_back(t);
        out.lhs.push_back(trace.errors[t]);
        out.rhs.push_back(std::exp(log_rhs));
        if (!(out.lhs.back() <= out.rhs.back() + contraction_tolerance))
            out.holds = false;
    }
    return out;
}

}  // namespace siht
