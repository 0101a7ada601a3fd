#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opspace/opspace_norms.hpp"
#include "opspace/strip_quotient.hpp"

#include <cmath>
#include <numbers>

using namespace opspace;

namespace {

const StripQuadrature& quad() {
    static const StripQuadrature q = harmonic_measure();
    return q;
}

template <class F>
ComplexVector on_line(const StripQuadrature& q, F fn, int line) {
    ComplexVector v(q.nodes.size());
    for (Eigen::Index j = 0; j < q.nodes.size(); ++j) v[j] = fn(Complex(line, q.nodes[j]));
    return v;
}

}  // namespace

TEST_CASE("harmonic measure densities match the strip Poisson kernel") {
    // from 1/2 each line carries density 1/cosh(pi t)
    for (double t : {0.0, 0.3, -0.3, 1.0, 2.5, -4.0}) {
        const double expect = 1.0 / std::cosh(std::numbers::pi * t);
        for (int line : {0, 1}) {
            CHECK(strip_density_cayley(t, line) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(std::abs(strip_density_cayley(t, line) - strip_density_tanh(t, line)) < 1e-8);
        }
    }
    CHECK(strip_density_cayley(0.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(strip_density_cayley(0.7, 1) == doctest::Approx(strip_density_cayley(-0.7, 1)).epsilon(1e-14));
    CHECK(strip_density_cayley(2.0, 1) < strip_density_cayley(1.0, 1));
}

TEST_CASE("harmonic measure is a pair of probability measures reproducing harmonic functions") {
    const auto& q = quad();
    CHECK(std::abs(q.w0.sum() - 1.0) < 1e-8);
    CHECK(std::abs(q.w1.sum() - 1.0) < 1e-8);
    CHECK(q.reproducing_error <= 1e-6);
    CHECK(q.density_gap <= 1e-8);
    // Re z integrates to 1/2
    double re = 0.0;
    for (Eigen::Index j = 0; j < q.nodes.size(); ++j) re += 0.5 * (0.0 * q.w0[j] + 1.0 * q.w1[j]);
    CHECK(re == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(harmonic_test_set().size() == 12);
    CHECK_THROWS(harmonic_measure(4, 6.0));
    CHECK_THROWS(harmonic_measure(41, 1.0));  // the truncated tails miss the reproducing tolerance
}

TEST_CASE("Hardy basis traces") {
    const auto& q = quad();
    const auto b = HardyBasis::exponential(16);
    CHECK(b.size() >= 16);
    CHECK(hardy_trace_consistency(b, q) <= 1e-8);
    const auto b32 = HardyBasis::exponential(32);
    for (double beta : b.beta) {
        bool found = false;
        for (double c : b32.beta) found = found || std::abs(c - beta) < 1e-12;
        CHECK(found);  // nested grids
    }
    bool has_constant = false;
    for (double beta : b.beta) has_constant = has_constant || beta == 0.0;
    CHECK(has_constant);
}

TEST_CASE("the quotient norm is the l2 norm at the scalar level") {
    const auto& q = quad();
    const auto b = HardyBasis::exponential(16);
    for (int s = 0; s < 20; ++s) {
        Rng rng = substream(51, s);
        const int K = 1 + s % 3;
        std::vector<ComplexMatrix> x;
        double l2 = 0.0;
        for (int i = 0; i < K; ++i) {
            x.push_back(random_gaussian(1, 1, rng));
            l2 += std::norm(x.back()(0, 0));
        }
        l2 = std::sqrt(l2);
        const auto r = quotient_oh_norm(x, q, b);
        REQUIRE(r.feasible);
        CHECK(std::abs(r.value - l2) <= 5e-3 * l2);
    }
    const auto zero = quotient_oh_norm({ComplexMatrix::Zero(2, 2)}, q, b);
    CHECK(zero.value == 0.0);
}

TEST_CASE("the quotient estimate decreases toward the OH norm") {
    const auto& q = quad();
    Rng rng = substream(52, 0);
    std::vector<ComplexMatrix> x;
    for (int i = 0; i < 2; ++i) x.push_back(random_gaussian(2, 2, rng));
    const double oh = oh_closed_form(x);
    const auto r8 = quotient_oh_norm(x, q, HardyBasis::exponential(8));
    const auto r16 = quotient_oh_norm(x, q, HardyBasis::exponential(16), {}, &r8.f);
    const auto r32 = quotient_oh_norm(x, q, HardyBasis::exponential(32), {}, &r16.f);
    CHECK(r16.value <= r8.value + 1e-9);
    CHECK(r32.value <= r16.value + 1e-9);
    CHECK(r32.value >= oh - 1e-3);
    CHECK(r32.value - oh <= 1e-2 * oh);
}

TEST_CASE("the boundary transfer operator") {
    const auto& q = quad();
    double prev_spread = 0.0;
    for (int D : {8, 16, 32}) {
        const auto g = graph_operator_T(q, HardyBasis::exponential(D));
        const Eigen::Index r = g.U.cols();
        CHECK((g.U.adjoint() * g.U - ComplexMatrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(g.lambda.minCoeff() > 0.0);
        for (Eigen::Index i = 1; i < g.lambda.size(); ++i) CHECK(g.lambda[i] <= g.lambda[i - 1]);
        // T = U Lambda in singular-value form
        const ComplexMatrix back = g.U * g.lambda.cast<Complex>().asDiagonal();
        CHECK(std::abs(operator_norm(back) - operator_norm(g.T)) < 1e-9 * operator_norm(g.T));
        const double spread = std::log10(g.lambda.maxCoeff() / g.lambda.minCoeff());
        CHECK(spread >= prev_spread);
        prev_spread = spread;
    }
    CHECK(prev_spread > 2.0);  // several orders of magnitude
    CHECK(constant_transfer_ratio(q, HardyBasis::exponential(16)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("kernel of evaluation at the center") {
    const auto& q = quad();
    for (int K : {1, 2, 3}) {
        int eff = 0;
        const int kd = quotient_kernel_dimension(q, HardyBasis::exponential(16), K, eff);
        CHECK(eff > 0);
        CHECK(kd == K * eff - K);
    }
}

TEST_CASE("the mean value bound") {
    const auto& q = quad();
    auto one = [](Complex) { return Complex(1.0, 0.0); };
    const auto p1 = poisson_mean_bound(q, on_line(q, one, 0), on_line(q, one, 1), 1.0);
    CHECK(std::abs(p1.slack) < 1e-8);

    // |e^(pi z)| is 1 on the left line and e^pi on the right, so the bound reads e^(pi/2) <= (1 + e^pi) / 2
    auto ex = [](Complex z) { return std::exp(std::numbers::pi * z); };
    const auto p2 = poisson_mean_bound(q, on_line(q, ex, 0), on_line(q, ex, 1), ex(0.5));
    CHECK(p2.lhs == doctest::Approx(std::exp(std::numbers::pi / 2.0)).epsilon(1e-12));
    CHECK(p2.rhs == doctest::Approx((1.0 + std::exp(std::numbers::pi)) / 2.0).epsilon(1e-8));
    CHECK(p2.slack > 0.0);

    Rng rng = substream(53, 0);
    for (int t = 0; t < 10; ++t) {
        const ComplexVector c = random_gaussian(4, 1, rng).col(0);
        auto poly = [&c](Complex z) {
            Complex acc = 0.0, w = 1.0;
            for (Eigen::Index k = 0; k < c.size(); ++k, w *= std::exp(std::numbers::pi * (z - 1.0))) acc += c[k] * w;
            return acc;
        };
        const auto p = poisson_mean_bound(q, on_line(q, poly, 0), on_line(q, poly, 1), poly(0.5));
        CHECK(p.slack >= -1e-8);
    }
}

TEST_CASE("the quantization bridge") {
    const auto r = quantization_bridge(8, 2, 4, 54);
    CHECK(r.identity_error <= 1e-10);
    CHECK(r.isometry_error <= 1e-10);
    CHECK(r.linearity_error <= 1e-10);
    for (const auto& row : r.rows) CHECK_MESSAGE(row.pass, row.name);
}
