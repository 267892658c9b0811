#ifndef SIHT_SPARSE_HPP
#define SIHT_SPARSE_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace siht {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted, duplicate-free set of coordinates in [0, N).
class IndexSet {
public:
    IndexSet() = default;

    // Sorts and validates; throws std::invalid_argument on duplicates or
    // indices >= dimension.
    static IndexSet from_indices(std::vector<std::size_t> indices, std::size_t dimension);

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(std::size_t i) const;
    bool is_subset_of(const IndexSet& other) const;

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<std::size_t> indices_;
};

// A length-N vector together with the sparsity budget K it is held to.
// Used both for the ground truth and for algorithm iterates.
class SparseSignal {
public:
    SparseSignal() = default;

    // Throws std::invalid_argument unless 1 <= K <= N and values has at
    // most K nonzeros.
    SparseSignal(Vector values, std::size_t sparsity_budget);

    static SparseSignal zero(std::size_t dimension, std::size_t sparsity_budget);

    const Vector& values() const noexcept { return values_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(values_.size()); }
    std::size_t sparsity_budget() const noexcept { return sparsity_budget_; }
    std::size_t nonzeros() const;

private:
    Vector values_;
    std::size_t sparsity_budget_ = 0;
};

// Keeps the k largest-magnitude entries of v and zeroes the rest. Equal
// magnitudes are resolved in favour of the lower index, with exact
// floating-point comparison.
Vector hard_threshold(const Vector& v, std::size_t k);

IndexSet support(const Vector& v);

// Euclidean distance ||v - w||.
double l2_error(const Vector& v, const Vector& w);

}  // namespace siht

#endif  // SIHT_SPARSE_HPP
