#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opspace/cb_estimate.hpp"
#include "opspace/matrix_core.hpp"

#include <cmath>

using namespace opspace;

namespace {

LinearMapSpec between(OpSpaceDescriptor from, OpSpaceDescriptor to, ComplexMatrix m) {
    return {CbSource::descriptor(std::move(from)), std::move(to), std::move(m)};
}

}  // namespace

TEST_CASE("the identity on a row space has cb norm one at every level") {
    for (int k = 1; k <= 3; ++k) {
        CbEstimateOptions o;
        o.level = k;
        o.iterations = 60;
        const auto r = cb_norm_level_estimate(between(OpSpaceDescriptor::row(3), OpSpaceDescriptor::row(3), ComplexMatrix::Identity(3, 3)), o);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("a diagonal map from rows to columns approaches the Hilbert-Schmidt norm") {
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = 0.5;
    CbEstimateOptions o;
    o.level = 2;
    const auto r = cb_norm_level_estimate(between(OpSpaceDescriptor::row(2), OpSpaceDescriptor::column(2), u), o);
    const double hs = cb_norm_exact(u, HilbertSide::Row, HilbertSide::Column);
    CHECK(r.value >= 1.0 - 1e-9);
    CHECK(r.value <= hs * (1.0 + 1e-9));
    CHECK(r.value >= 0.999 * hs);
    REQUIRE(r.per_level.size() == 2);
    CHECK(r.per_level[0] <= r.per_level[1]);
    CHECK(r.per_level[0] == doctest::Approx(1.0).epsilon(1e-6));  // the operator norm at level one
}

TEST_CASE("the identity from OH to the intersection has growing cb norm") {
    // dimension n at level n; the value exceeds the single level ratio and increases with n
    double prev = 0.0;
    for (int n = 2; n <= 3; ++n) {
        CbEstimateOptions o;
        o.level = n;
        o.iterations = 150;
        const auto r = cb_norm_level_estimate(
            between(OpSpaceDescriptor::oh(n), OpSpaceDescriptor::rcapc(n), ComplexMatrix::Identity(n, n)), o);
        // x = sum e_i1 (x) e_i: intersection norm sqrt(n), OH norm n^(1/4)
        CHECK(r.value >= std::pow(n, 0.25) * (1.0 - 1e-9));
        CHECK(r.value > prev);
        prev = r.value;
    }
}

TEST_CASE("levels are nondecreasing and bounded by the exact cb norm") {
    Rng rng = substream(21, 0);
    const ComplexMatrix u = random_gaussian(3, 3, rng);
    CbEstimateOptions o;
    o.level = 3;
    o.iterations = 100;
    const auto r = cb_norm_level_estimate(between(OpSpaceDescriptor::column(3), OpSpaceDescriptor::row(3), u), o);
    for (std::size_t k = 1; k < r.per_level.size(); ++k) CHECK(r.per_level[k - 1] <= r.per_level[k]);
    CHECK(r.value <= cb_norm_exact(u, HilbertSide::Column, HilbertSide::Row) * (1.0 + 1e-9));
    CHECK(r.per_level[0] >= operator_norm(u) * (1.0 - 1e-6));
}

TEST_CASE("applying a map and splitting block matrices") {
    Rng rng = substream(22, 0);
    const ComplexMatrix u = random_gaussian(2, 3, rng);
    std::vector<ComplexMatrix> a;
    for (int j = 0; j < 3; ++j) a.push_back(random_gaussian(2, 2, rng));
    const auto b = apply_map(u, a);
    REQUIRE(b.size() == 2);
    for (int i = 0; i < 2; ++i) {
        ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
        for (int j = 0; j < 3; ++j) expect += u(i, j) * a[j];
        CHECK((b[i] - expect).norm() < 1e-14);
    }
    // x = sum x_pq (x) e_pq with x_pq in M_k, N = 2, k = 3
    const int N = 2, k = 3;
    const ComplexMatrix x = random_gaussian(k * N, k * N, rng);
    const auto parts = algebra_coefficients(x, N);
    REQUIRE(parts.size() == 4);
    ComplexMatrix back = ComplexMatrix::Zero(k * N, k * N);
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) back += kron(parts[p * N + q], matrix_unit(N, p, q));
    CHECK((back - x).norm() < 1e-13);
}
