#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opspace/opspace_norms.hpp"
#include "opspace/subspace_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace opspace;

namespace {

ComplexVector unit(int m, int i) {
    ComplexVector v = ComplexVector::Zero(m);
    v[i] = 1.0;
    return v;
}

ComplexVector zero(int m) { return ComplexVector::Zero(m); }

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("decomposing a pure row subspace") {
    const auto s = SubspaceRC::from_pairs({{unit(2, 0), zero(2)}, {unit(2, 1), zero(2)}});
    const auto d = xu_decompose(s);
    CHECK(d.row_part.cols() == 2);
    CHECK(d.col_part.cols() == 0);
    CHECK(d.lambda.size() == 0);
    CHECK(subspace_distance(d.reassembled(), s.basis) < 1e-9);
}

TEST_CASE("decomposing the graph of a diagonal") {
    const auto s = SubspaceRC::from_pairs({{unit(2, 0), unit(2, 0)}, {unit(2, 1), 2.0 * unit(2, 1)}});
    const auto d = xu_decompose(s);
    CHECK(d.row_part.cols() == 0);
    CHECK(d.col_part.cols() == 0);
    REQUIRE(d.lambda.size() == 2);
    std::vector<double> l(d.lambda.data(), d.lambda.data() + 2);
    l = sorted(l);
    CHECK(l[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("decomposing a mixed subspace by hand") {
    // span{(e1,0), (0,e2), (e3,e3)}: the intersection with the column side is e2, the rest
    // projects injectively to rows; the kernel of the induced map is e1 and e3 -> e3 with weight 1
    const int m = 3;
    const auto s = SubspaceRC::from_pairs({{unit(m, 0), zero(m)}, {zero(m), unit(m, 1)}, {unit(m, 2), unit(m, 2)}});
    const auto d = xu_decompose(s);
    REQUIRE(d.row_part.cols() == 1);
    REQUIRE(d.col_part.cols() == 1);
    REQUIRE(d.lambda.size() == 1);
    CHECK(d.lambda[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.row_part(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.col_part(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(subspace_distance(d.reassembled(), s.basis) < 1e-9);
}

TEST_CASE("decomposition round trip on random subspaces") {
    Rng rng = substream(41, 0);
    for (int t = 0; t < 60; ++t) {
        const int m = 2 + t % 5;
        const int k = 1 + t % std::min(4, 2 * m);
        SubspaceRC s;
        s.m = m;
        s.basis = random_gaussian(2 * m, k, rng);
        // plant row-only and column-only directions on some draws
        if (t % 3 == 1) s.basis.block(m, 0, m, 1).setZero();
        if (t % 3 == 2) s.basis.block(0, k - 1, m, 1).setZero();
        const auto d = xu_decompose(s);
        CHECK(d.row_part.cols() + d.col_part.cols() + d.lambda.size() == k);
        CHECK(subspace_distance(d.reassembled(), s.basis) <= 1e-8);
        for (Eigen::Index i = 0; i < d.lambda.size(); ++i) CHECK(d.lambda[i] > 0.0);
    }
    SubspaceRC bad;
    bad.m = 2;
    bad.basis = ComplexMatrix::Zero(4, 2);
    bad.basis(0, 0) = bad.basis(0, 1) = 1.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("splitting Lambda at one") {
    auto s = split_lambda({0.5, 2.0});
    CHECK(s.lambda1 == std::vector<double>{0.5});
    CHECK(s.lambda2 == std::vector<double>{2.0});
    CHECK(s.inverted_lambda2() == std::vector<double>{0.5});
    s = split_lambda({1.0, 1.0});
    CHECK(s.lambda1.size() == 2);
    CHECK(s.lambda2.empty());
    CHECK_THROWS(split_lambda({1.0, -1.0}));

    Rng rng = substream(42, 0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> l;
        for (int i = 0; i < 7; ++i) l.push_back(std::exp(u(rng)));
        const auto sp = split_lambda(l);
        std::vector<double> all = sp.lambda1;
        all.insert(all.end(), sp.lambda2.begin(), sp.lambda2.end());
        CHECK(sorted(all) == sorted(l));
        for (double x : sp.lambda1) CHECK(x <= 1.0);
        for (double x : sp.lambda2) CHECK(x > 1.0);
        for (int i : sp.projector(0.5)) CHECK(l[i] < 0.5);
    }
}

TEST_CASE("graph flip is a complete isometry") {
    Rng rng = substream(43, 0);
    for (int t = 0; t < 10; ++t) {
        const int n = 3;
        std::vector<double> lam;
        std::uniform_real_distribution<double> u(0.2, 4.0);
        for (int i = 0; i < n; ++i) lam.push_back(u(rng));
        std::vector<double> inv;
        for (double l : lam) inv.push_back(1.0 / l);
        std::vector<ComplexMatrix> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back(random_gaussian(2, 2, rng));
            b.push_back(lam[i] * a.back());  // the same point written over the flipped graph
        }
        const double lhs = mn_norm({a, OpSpaceDescriptor::graph(lam, GraphOrientation::RC)});
        const double rhs = mn_norm({b, OpSpaceDescriptor::graph(inv, GraphOrientation::CR)});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("classification with declared tails") {
    CHECK(classify(std::vector<double>(20, 1.0), TailRule{TailKind::BoundedRatio}).label == "R∩C");
    std::vector<double> geo, harm, root;
    for (int i = 1; i <= 30; ++i) {
        geo.push_back(std::pow(2.0, -i));
        harm.push_back(1.0 / i);
        root.push_back(1.0 / std::sqrt(double(i)));
    }
    CHECK(classify(geo, TailRule::geometric(0.5)).label == "R");
    CHECK(classify(harm, TailRule::power_law(1.0)).label == "R");
    CHECK(classify(root, TailRule::power_law(0.5)).label == "graph-type");
    CHECK_THROWS(classify(geo, std::nullopt));

    ClassifyInput in;
    in.components.push_back({std::vector<double>(5, 1.0), TailRule{TailKind::BoundedRatio}});
    in.include_row = true;
    in.include_col = true;
    const auto r = classify(in);
    CHECK(r.label == "R⊕(R∩C)⊕C");
    CHECK(r.note == "heuristic at finite scale");
}

TEST_CASE("classification is invariant under permutation and graph flip") {
    std::vector<double> geo;
    for (int i = 1; i <= 12; ++i) geo.push_back(std::pow(3.0, -i));
    std::vector<double> perm = geo;
    std::reverse(perm.begin(), perm.end());
    std::swap(perm[1], perm[7]);
    const auto a = classify(geo, TailRule::geometric(1.0 / 3.0));
    CHECK(classify(perm, TailRule::geometric(1.0 / 3.0)).label == a.label);

    std::vector<double> inv;
    for (double x : geo) inv.push_back(1.0 / x);
    const auto b = classify(inv, TailRule::geometric(3.0));
    CHECK(b.label == "C");
    CHECK(swap_row_column_label(b.label) == a.label);
    CHECK(a.small_sum == doctest::Approx(b.large_sum).epsilon(1e-14));

    ClassifyInput in;
    in.components.push_back({geo, TailRule::geometric(1.0 / 3.0)});
    in.components.push_back({std::vector<double>(4, 1.0), TailRule{TailKind::BoundedRatio}});
    const auto c = classify(in);
    CHECK(c.label == "R⊕(R∩C)");
    CHECK(swap_row_column_label(c.label) == "(R∩C)⊕C");
}

TEST_CASE("projection onto a graph") {
    // m = 1, Lambda = 1, P(x,y) = (x, x)
    ComplexMatrix p(2, 2);
    p << 1.0, 0.0, 1.0, 0.0;
    const auto r = projection_decompose(p, {1.0});
    REQUIRE(r.valid);
    CHECK(std::abs(r.alpha(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(r.beta(0, 0)) < 1e-14);
    CHECK(r.lambda_hs == doctest::Approx(1.0));
    CHECK(r.lambda_hs <= 2.0 * std::max(1.0, r.cb_bound));
    for (const auto& row : r.rows) CHECK_MESSAGE(row.pass, row.name);

    const auto bad = projection_decompose(ComplexMatrix::Identity(2, 2), {1.0});
    CHECK_FALSE(bad.valid);
    CHECK(bad.diagnostic == "range differs from G(Lambda)");
    ComplexMatrix notp(2, 2);
    notp << 2.0, 0.0, 0.0, 0.0;
    CHECK_FALSE(projection_decompose(notp, {1.0}).valid);
}

TEST_CASE("the chain holds on projections with alpha = id") {
    Rng rng = substream(44, 0);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 20; ++t) {
        const int m = 1 + t % 6;
        std::vector<double> sigma;
        for (int i = 0; i < m; ++i) sigma.push_back(u(rng));
        const ComplexMatrix p = graph_projection(ComplexMatrix::Zero(m, m), sigma);
        const auto r = projection_decompose(p, sigma);
        REQUIRE(r.valid);
        double hs = 0.0;
        for (double s : sigma) hs += s * s;
        hs = std::sqrt(hs);
        CHECK(r.lambda_hs == doctest::Approx(hs).epsilon(1e-12));
        // alpha = id on R costs 1, Lambda alpha: R -> C costs ||sigma||_2
        CHECK(r.cb_bound == doctest::Approx(std::max(1.0, hs)).epsilon(1e-9));
        CHECK(r.lambda_hs <= 2.0 * r.cb_bound + 1e-8);
    }
}

TEST_CASE("the chain holds on random graph projections") {
    Rng rng = substream(45, 0);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 30; ++t) {
        const int m = 1 + t % 6;
        std::vector<double> lam;
        for (int i = 0; i < m; ++i) lam.push_back(u(rng));
        const ComplexMatrix p = graph_projection(random_gaussian(m, m, rng), lam);
        const auto r = projection_decompose(p, lam);
        REQUIRE(r.valid);
        CHECK(r.identity_error < 1e-10);
        CHECK(r.lambda_hs <= 2.0 * r.cb_bound + 1e-8);
        for (const auto& row : r.rows) CHECK_MESSAGE(row.pass, row.name);
    }
}

TEST_CASE("pi2n by the eigenvalue formula") {
    CHECK(pi2n({0.1, 0.2, 0.3}, 0.25, 2) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));
    CHECK(pi2n({0.1, 0.2, 0.3}, 0.05, 2) == 0.0);
    CHECK(pi2n({0.1, 0.2, 0.3}, 0.25, 5) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));
    CHECK_THROWS(pi2n({0.1}, 0.5, 0));
}

TEST_CASE("pi2n dominates random orthonormal tuples and is monotone") {
    Rng rng = substream(46, 0);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int t = 0; t < 10; ++t) {
        const int m = 6;
        std::vector<double> lam;
        for (int i = 0; i < m; ++i) lam.push_back(u(rng));
        const double eps = 0.6;
        std::vector<int> sel;
        for (int i = 0; i < m; ++i)
            if (lam[i] < eps) sel.push_back(i);
        for (int n = 1; n <= 3; ++n) {
            const double formula = pi2n(lam, eps, n);
            CHECK(formula == doctest::Approx(pi2n_subsets(lam, eps, n)).epsilon(1e-14));
            if (sel.empty()) continue;
            const int r = static_cast<int>(sel.size());
            const int cols = std::min(n, r);
            for (int k = 0; k < 200; ++k) {
                const ComplexMatrix q = orthonormal_basis(random_gaussian(r, cols, rng));
                double s = 0.0;
                for (int j = 0; j < cols; ++j)
                    for (int i = 0; i < r; ++i) s += lam[sel[i]] * lam[sel[i]] * std::norm(q(i, j));
                CHECK(std::sqrt(s) <= formula + 1e-9);
            }
        }
        for (int n = 1; n < 4; ++n) CHECK(pi2n(lam, eps, n) <= pi2n(lam, eps, n + 1));
        CHECK(pi2n(lam, 0.3, 2) <= pi2n(lam, 0.6, 2));
    }
}

TEST_CASE("probes of the pi2n inequality") {
    const auto r = pi2n_probes({0.05, 0.1, 0.2, 0.3, 0.7}, 0.5, 3, 300, 47);
    CHECK(r.probes == 300);
    CHECK(r.min_slack >= -1e-9);
    for (const auto& row : r.rows) CHECK_MESSAGE(row.pass, row.name);
}
