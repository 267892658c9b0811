#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "siht/random.hpp"
#include "siht/sparse.hpp"

using siht::Vector;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v[i++] = x;
    return v;
}

Vector random_vector(std::size_t n, std::uint64_t seed)
{
    siht::Stream rng(seed);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v)
        x = rng.normal();
    return v;
}

// Smallest ||w - v|| over all w supported on at most k coordinates, by
// enumerating every support (bitmask) of size <= k.
double best_k_term_error(const Vector& v, std::size_t k)
{
    const auto n = static_cast<unsigned>(v.size());
    double best = INFINITY;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > k)
            continue;
        double err = 0.0;
        for (unsigned i = 0; i < n; ++i)
            if (!(mask & (1u << i)))
                err += v[i] * v[i];
        best = std::min(best, std::sqrt(err));
    }
    return best;
}

}  // namespace

TEST_CASE("hard_threshold keeps the largest magnitudes")
{
    CHECK(siht::hard_threshold(vec({3, -5, 1}), 2) == vec({3, -5, 0}));
    CHECK(siht::hard_threshold(vec({0, 0, 7, 0}), 1) == vec({0, 0, 7, 0}));
    CHECK(siht::hard_threshold(vec({1, 2, 3}), 3) == vec({1, 2, 3}));
}

TEST_CASE("hard_threshold tie-break keeps the lower index")
{
    CHECK(siht::hard_threshold(vec({2, -2, 0}), 1) == vec({2, 0, 0}));
    CHECK(siht::hard_threshold(vec({1, -1, 1, -1}), 2) == vec({1, -1, 0, 0}));
    CHECK(siht::hard_threshold(vec({0, 4, 4, 4}), 2) == vec({0, 4, 4, 0}));
}

TEST_CASE("hard_threshold is the identity on K-sparse input")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Vector v = random_vector(12, seed);
        v = siht::hard_threshold(v, 4);
        for (std::size_t k = 4; k <= 12; ++k)
            CHECK(siht::hard_threshold(v, k) == v);
    }
}

TEST_CASE("hard_threshold rejects budgets outside [1, N]")
{
    CHECK_THROWS_AS(siht::hard_threshold(vec({1, 2}), 0), std::invalid_argument);
    CHECK_THROWS_AS(siht::hard_threshold(vec({1, 2}), 3), std::invalid_argument);
}

TEST_CASE("hard_threshold properties on random inputs")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        siht::Stream rng(seed + 1000);
        const std::size_t n = 1 + rng.below(10);
        const std::size_t k = 1 + rng.below(n);
        const Vector v = random_vector(n, seed);
        const Vector h = siht::hard_threshold(v, k);

        // idempotence
        CHECK(siht::hard_threshold(h, k) == h);
        // at most k nonzeros, supported inside supp(v)
        CHECK(siht::support(h).size() <= k);
        CHECK(siht::support(h).is_subset_of(siht::support(v)));
        // best k-term approximation
        CHECK(siht::l2_error(h, v) <= best_k_term_error(v, k) + 1e-15);

        // permutation equivariance (continuous draws are tie-free)
        std::vector<Eigen::Index> perm(n);
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        Vector pv(static_cast<Eigen::Index>(n));
        Vector ph(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            pv[static_cast<Eigen::Index>(i)] = v[perm[i]];
            ph[static_cast<Eigen::Index>(i)] = h[perm[i]];
        }
        CHECK(siht::hard_threshold(pv, k) == ph);
    }
}

TEST_CASE("support")
{
    const auto s = siht::support(vec({0, 4, 0, -1}));
    CHECK(s.indices() == std::vector<std::size_t>{1, 3});
    CHECK(siht::support(Vector::Zero(5)).empty());
}

TEST_CASE("IndexSet validation")
{
    CHECK_THROWS_AS(siht::IndexSet::from_indices({1, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(siht::IndexSet::from_indices({4}, 4), std::invalid_argument);
    const auto s = siht::IndexSet::from_indices({3, 0, 2}, 4);
    CHECK(s.indices() == std::vector<std::size_t>{0, 2, 3});
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(1));
}

TEST_CASE("SparseSignal enforces its budget")
{
    CHECK_NOTHROW(siht::SparseSignal(vec({0, 1, 0}), 1));
    CHECK_THROWS_AS(siht::SparseSignal(vec({1, 1, 0}), 1), std::invalid_argument);
    CHECK_THROWS_AS(siht::SparseSignal(vec({1, 0}), 0), std::invalid_argument);
    CHECK_THROWS_AS(siht::SparseSignal(vec({1, 0}), 3), std::invalid_argument);
    CHECK(siht::SparseSignal::zero(4, 2).nonzeros() == 0);
}

TEST_CASE("l2_error")
{
    const Vector v = random_vector(30, 5);
    CHECK(siht::l2_error(v, v) == 0.0);
    CHECK(siht::l2_error(vec({3, 0}), vec({0, 4})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(siht::l2_error(vec({1}), vec({1, 2})), std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Vector w = random_vector(200, seed);
        long double acc = 0.0L;
        for (double x : w)
            acc += static_cast<long double>(x) * static_cast<long double>(x);
        const double oracle = static_cast<double>(std::sqrt(acc));
        CHECK(siht::l2_error(w, Vector::Zero(200)) == doctest::Approx(oracle).epsilon(1e-14));
        CHECK(siht::l2_error(w, v.head(1).replicate(200, 1)) ==
              siht::l2_error(v.head(1).replicate(200, 1), w));
    }
}
