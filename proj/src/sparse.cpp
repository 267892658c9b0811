#include "siht/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace siht {

IndexSet IndexSet::from_indices(std::vector<std::size_t> indices, std::size_t dimension)
{
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("IndexSet: duplicate index");
    if (!indices.empty() && indices.back() >= dimension)
        throw std::invalid_argument("IndexSet: index " + std::to_string(indices.back()) +
                                    " out of range for dimension " + std::to_string(dimension));
    IndexSet s;
    s.indices_ = std::move(indices);
    return s;
}

bool IndexSet::contains(std::size_t i) const
{
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool IndexSet::is_subset_of(const IndexSet& other) const
{
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                         indices_.end());
}

SparseSignal::SparseSignal(Vector values, std::size_t sparsity_budget)
    : values_(std::move(values)), sparsity_budget_(sparsity_budget)
{
    if (sparsity_budget_ < 1 || sparsity_budget_ > dimension())
        throw std::invalid_argument("SparseSignal: need 1 <= K <= N (K=" +
                                    std::to_string(sparsity_budget_) +
                                    ", N=" + std::to_string(dimension()) + ")");
    if (nonzeros() > sparsity_budget_)
        throw std::invalid_argument("SparseSignal: " + std::to_string(nonzeros()) +
                                    " nonzeros exceed budget " +
                                    std::to_string(sparsity_budget_));
}

SparseSignal SparseSignal::zero(std::size_t dimension, std::size_t sparsity_budget)
{
    return SparseSignal(Vector::Zero(static_cast<Eigen::Index>(dimension)), sparsity_budget);
}

std::size_t SparseSignal::nonzeros() const
{
    return static_cast<std::size_t>((values_.array() != 0.0).count());
}

Vector hard_threshold(const Vector& v, std::size_t k)
{
    const auto n = static_cast<std::size_t>(v.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("hard_threshold: need 1 <= K <= length (K=" +
                                    std::to_string(k) + ", length=" + std::to_string(n) + ")");
    if (k == n)
        return v;

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto before = [&v](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(v[a]);
        const double mb = std::abs(v[b]);
        return ma > mb || (ma == mb && a < b);
    };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     order.end(), before);

    Vector out = Vector::Zero(v.size());
    for (std::size_t i = 0; i < k; ++i)
        out[order[i]] = v[order[i]];
    return out;
}

IndexSet support(const Vector& v)
{
    std::vector<std::size_t> idx;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0)
            idx.push_back(static_cast<std::size_t>(i));
    return IndexSet::from_indices(std::move(idx), static_cast<std::size_t>(v.size()));
}

double l2_error(const Vector& v, const Vector& w)
{
    if (v.size() != w.size())
        throw std::invalid_argument("l2_error: length mismatch (" + std::to_string(v.size()) +
                                    " vs " + std::to_string(w.size()) + ")");
    return (v - w).norm();
}

}  // namespace siht
