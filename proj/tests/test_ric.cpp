#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "siht/measurement.hpp"
#include "siht/random.hpp"
#include "siht/recovery.hpp"
#include "siht/ric.hpp"

using namespace siht;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed)
{
    Stream rng(seed);
    Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            g(i, j) = g(j, i) = rng.normal();
    return g;
}

// det(G - lambda I) by Gaussian elimination with partial pivoting.
long double char_poly(const Matrix& g, long double lambda)
{
    const auto n = static_cast<std::size_t>(g.rows());
    std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                      (i == j ? lambda : 0.0L);
    long double det = 1.0L;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c]))
                piv = r;
        if (a[piv][c] == 0.0L)
            return 0.0L;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const long double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

// All real roots of det(G - lambda I) on the Gershgorin interval, located by
// sign changes on a fine grid and refined by bisection.
std::vector<double> char_poly_roots(const Matrix& g)
{
    double bound = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        bound = std::max(bound, g.row(i).cwiseAbs().sum());
    bound += 1e-6;
    const int steps = 20000;
    std::vector<double> roots;
    long double lo = -bound;
    long double flo = char_poly(g, lo);
    for (int s = 1; s <= steps; ++s) {
        long double hi = -bound + 2.0L * bound * s / steps;
        long double fhi = char_poly(g, hi);
        if ((flo < 0) != (fhi < 0)) {
            long double a = lo, b = hi, fa = flo;
            for (int it = 0; it < 200; ++it) {
                const long double mid = 0.5L * (a + b);
                const long double fm = char_poly(g, mid);
                if ((fm < 0) == (fa < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(static_cast<double>(0.5L * (a + b)));
        }
        lo = hi;
        flo = fhi;
    }
    return roots;
}

// Largest |eigenvalue| of a symmetric 2x2 [[p, q], [q, r]] in closed form.
double norm_2x2(double p, double q, double r)
{
    const double mid = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), q);
    return std::max(std::abs(mid + rad), std::abs(mid - rad));
}

Matrix orthonormal_columns(std::size_t m, std::size_t n, std::uint64_t seed)
{
    const Matrix a = sample_matrix({Ensemble::gaussian}, m, n, seed);
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(n));
}

SparseSignal random_sparse(std::size_t n, std::size_t k, std::uint64_t seed)
{
    return sample_signal(n, k, seed);
}

}  // namespace

TEST_CASE("operator_norm_sym examples")
{
    CHECK(operator_norm_sym(Matrix::Zero(4, 4)) == 0.0);
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3, -5, 1;
    CHECK(operator_norm_sym(d) == doctest::Approx(5.0).epsilon(1e-14));
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(operator_norm_sym(asym), std::invalid_argument);
}

TEST_CASE("Jacobi eigenvalues agree with characteristic-polynomial bisection")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix g = random_symmetric(6, seed);
        const auto roots = char_poly_roots(g);
        REQUIRE(roots.size() == 6);
        const Vector eig = symmetric_eigenvalues(g);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(eig[static_cast<Eigen::Index>(i)] == doctest::Approx(roots[i]).epsilon(1e-9));
        double oracle = 0.0;
        for (double r : roots)
            oracle = std::max(oracle, std::abs(r));
        CHECK(std::abs(operator_norm_sym(g) - oracle) <= 1e-10 * std::max(1.0, oracle));
    }
}

TEST_CASE("ric of orthonormal and scaled-identity matrices")
{
    const Matrix q = orthonormal_columns(12, 8, 3);
    for (std::size_t r = 1; r <= 4; ++r)
        CHECK(ric(q, r).value <= 1e-12);
    for (double c : {0.5, 1.0, 2.0}) {
        const Matrix ci = c * Matrix::Identity(6, 6);
        for (std::size_t r = 1; r <= 6; ++r)
            CHECK(ric(ci, r).value == doctest::Approx(std::abs(c * c - 1.0)).epsilon(1e-12));
    }
    for (double lambda : {0.3, 1.7}) {
        const Matrix scaled = lambda * q;
        CHECK(ric(scaled, 3).value == doctest::Approx(std::abs(lambda * lambda - 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("ric order 2 matches the 2x2 closed form over all pairs")
{
    const Matrix phi = sample_matrix({Ensemble::gaussian}, 8, 12, 21);
    double oracle = 0.0;
    for (Eigen::Index i = 0; i < 12; ++i)
        for (Eigen::Index j = i + 1; j < 12; ++j) {
            const double p = phi.col(i).squaredNorm() - 1.0;
            const double r = phi.col(j).squaredNorm() - 1.0;
            const double off = phi.col(i).dot(phi.col(j));
            oracle = std::max(oracle, norm_2x2(p, off, r));
        }
    const auto res = ric(phi, 2);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(res.witness.size() == 2);
}

TEST_CASE("ric invariants")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix phi = sample_matrix({Ensemble::gaussian}, 7, 10, 100 + seed);
        double prev = 0.0;
        for (std::size_t r = 1; r <= 5; ++r) {
            const auto res = ric(phi, r);
            CHECK(res.value >= prev - 1e-12);
            prev = res.value;
            CHECK(std::abs(gram_deviation(phi, res.witness) - res.value) <= 1e-10);
        }
        const double delta1 =
            (phi.colwise().squaredNorm().array() - 1.0).abs().maxCoeff();
        CHECK(ric(phi, 1).value == doctest::Approx(delta1).epsilon(1e-12));
    }
}

TEST_CASE("ric refuses infeasible enumeration")
{
    const Matrix phi = sample_matrix({Ensemble::gaussian}, 10, 40, 1);
    CHECK_THROWS_AS(ric(phi, 20), std::invalid_argument);
    CHECK_THROWS_AS(ric(phi, 3, 100), std::invalid_argument);
    CHECK_THROWS_AS(ric(phi, 0), std::invalid_argument);
    CHECK(binomial(40, 20) == 137846528820ULL);
    CHECK(binomial(5, 7) == 0);
}

TEST_CASE("verify_contraction")
{
    SUBCASE("x_prev equal to truth holds vacuously")
    {
        const Matrix phi = sample_matrix({Ensemble::gaussian}, 12, 15, 2);
        const auto x = random_sparse(15, 2, 3);
        const auto check = verify_contraction(phi, x, x, 2);
        CHECK(check.holds);
        CHECK(check.prev_error == 0.0);
    }
    SUBCASE("orthonormal columns: zero bound, exact step")
    {
        const Matrix q = orthonormal_columns(20, 15, 4);
        const auto x = random_sparse(15, 2, 5);
        const auto check = verify_contraction(q, x, random_sparse(15, 2, 6), 2);
        CHECK(check.bound <= 1e-11);
        CHECK(check.ratio <= 1e-12);
        CHECK(check.holds);
    }
    SUBCASE("random desk-scale trials")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Matrix phi = sample_matrix({Ensemble::gaussian}, 12, 15, 50 + seed);
            const auto x = random_sparse(15, 2, 70 + seed);
            const auto prev = random_sparse(15, 2, 90 + seed);
            CHECK(verify_contraction(phi, x, prev, 2).holds);
        }
    }
    CHECK_THROWS_AS(verify_contraction(Matrix::Identity(5, 5), random_sparse(5, 2, 1),
                                       random_sparse(5, 2, 2), 2),
                    std::invalid_argument);
}

TEST_CASE("per-step error ratio obeys sqrt(3) delta_3K whenever it is a contraction")
{
    // Exhaustive RICs at N = 16, K <= 2; the row count is large enough that
    // sqrt(3) delta_3K < 1 occurs.
    int certified = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t k = 1 + seed % 2;
        const std::size_t m = 200 + 50 * (seed % 3);
        const Matrix phi = sample_matrix({Ensemble::gaussian}, m, 16, 300 + seed);
        const double delta = ric(phi, 3 * k).value;
        if (std::sqrt(3.0) * delta >= 1.0)
            continue;
        ++certified;
        const auto x = random_sparse(16, k, 400 + seed);
        const auto phase = observe(phi, x);
        SparseSignal it = SparseSignal::zero(16, k);
        for (int t = 0; t < 5; ++t) {
            const double before = l2_error(it.values(), x.values());
            it = iht_step(it, phase, k);
            const double after = l2_error(it.values(), x.values());
            if (before > vanishing_error)
                CHECK(after / before <= std::sqrt(3.0) * delta + contraction_tolerance);
        }
    }
    CHECK(certified > 10);
}

TEST_CASE("product_contraction_bound")
{
    SUBCASE("single phase agrees with iterated one-step checks")
    {
        const Matrix phi = sample_matrix({Ensemble::gaussian}, 12, 15, 9);
        const auto x = random_sparse(15, 1, 10);
        const auto x0 = SparseSignal::zero(15, 1);
        const auto res = product_contraction_bound({phi}, PhaseSchedule::from_durations({4}), 1,
                                                   x, x0);
        CHECK(res.holds);
        const double delta = res.deltas[0];
        SparseSignal it = x0;
        const auto phase = observe(phi, x);
        for (int t = 0; t < 4; ++t) {
            CHECK(verify_contraction(phi, x, it, 1, delta).holds);
            it = iht_step(it, phase, 1);
        }
        CHECK(res.lhs[0] == l2_error(it.values(), x.values()));
    }
    SUBCASE("three phases of two steps")
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            std::vector<Matrix> mats;
            for (std::uint64_t j = 0; j < 3; ++j)
                mats.push_back(sample_matrix({Ensemble::gaussian}, 12, 15, derive_seed({seed, j})));
            const auto x = random_sparse(15, 1, seed + 500);
            const auto res = product_contraction_bound(mats, PhaseSchedule::from_durations({2, 2, 2}),
                                                       1, x, SparseSignal::zero(15, 1));
            CHECK(res.holds);
            CHECK(res.boundaries == std::vector<std::size_t>{2, 4, 6});
        }
    }
    CHECK_THROWS_AS(product_contraction_bound({}, PhaseSchedule::per_step(1), 1,
                                              random_sparse(15, 1, 1), SparseSignal::zero(15, 1)),
                    std::invalid_argument);
}
