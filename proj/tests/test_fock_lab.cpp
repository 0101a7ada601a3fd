#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opspace/fock_lab.hpp"
#include "opspace/matrix_core.hpp"
#include "opspace/opspace_norms.hpp"

#include <cmath>

using namespace opspace;

namespace {

ComplexMatrix dense(const SparseOp& s) { return ComplexMatrix(s); }

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool all_rows_pass(const std::vector<CheckRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return !rows.empty();
}

}  // namespace

TEST_CASE("basis layout of the truncated Fock space") {
    for (int n = 1; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d) {
            const TruncatedFock f(n, d);
            Eigen::Index expect = 0, pw = 1;
            for (int k = 0; k <= d; ++k, pw *= 2 * n) expect += pw;
            CHECK(f.dim() == expect);
            CHECK(TruncatedFock::closed_form_dim(n, d) == expect);
        }
    const TruncatedFock f(2, 3);
    CHECK(f.word_index({}) == 0);
    CHECK(f.word(0).empty());
    // degree then lexicographic, first letter most significant
    CHECK(f.word_index({0}) == 1);
    CHECK(f.word_index({3}) == 4);
    CHECK(f.word_index({0, 0}) == 5);
    CHECK(f.word_index({0, 1}) == 6);
    CHECK(f.word_index({1, 0}) == 9);
    for (Eigen::Index i = 0; i < f.dim(); ++i) CHECK(f.word_index(f.word(i)) == i);
    CHECK(f.degree(f.word_index({2, 1, 0})) == 3);
}

TEST_CASE("creation operators") {
    const TruncatedFock f(2, 3);
    const ComplexVector e1 = f.left(0) * f.vacuum();
    CHECK(std::abs(e1[f.word_index({0})] - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e1.norm() - 1.0) < 1e-15);

    // r(e_j) appends on the right
    const ComplexVector w = f.right(1) * (f.left(0) * f.vacuum());
    CHECK(std::abs(w[f.word_index({0, 1})] - Complex(1.0, 0.0)) < 1e-15);

    // l(h)^* l(k) = <k, h> times the projection onto degrees < d
    Rng rng = substream(31, 0);
    for (int t = 0; t < 5; ++t) {
        const ComplexVector h = random_gaussian(4, 1, rng).col(0), k = random_gaussian(4, 1, rng).col(0);
        const ComplexMatrix lhs = f.creation(h, Side::Left).adjoint() * f.creation(k, Side::Left);
        const Complex ip = h.adjoint() * k;
        CHECK(max_abs(lhs - ip * dense(f.degree_projection(3))) < 1e-12);
        const ComplexMatrix rhs = f.creation(h, Side::Right).adjoint() * f.creation(k, Side::Right);
        CHECK(max_abs(rhs - ip * dense(f.degree_projection(3))) < 1e-12);
    }

    // left and right creations commute below the cutoff
    const ComplexMatrix p = dense(f.degree_projection(2));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const ComplexMatrix c = dense(f.left(i)) * dense(f.right(j)) - dense(f.right(j)) * dense(f.left(i));
            CHECK(max_abs(c * p) < 1e-15);
        }
}

TEST_CASE("generalized circular elements") {
    const TruncatedFock f(2, 3);
    const double th = 0.3;
    const std::vector<double> lam{0.6, 1.7};
    const auto fam = CircularFamily::build(f, th, lam);
    for (int i = 0; i < 2; ++i) {
        const double l = lam[static_cast<std::size_t>(i)];
        CHECK(fam.xi[static_cast<std::size_t>(i)] == doctest::Approx(th / (1.0 - th) / std::sqrt(l)).epsilon(1e-14));
        const ComplexMatrix built = (1.0 - th) * std::pow(l, th / 2.0) * dense(f.left(i)) +
                                    th * std::pow(l, -(1.0 - th) / 2.0) * dense(f.left(2 + i)).adjoint();
        CHECK(max_abs(fam.x_dense(i) - built) < 1e-14);
        const ComplexMatrix scaled = (1.0 - th) * std::pow(l, th / 2.0) *
                                     (dense(f.left(i)) + fam.xi[static_cast<std::size_t>(i)] * dense(f.left(2 + i)).adjoint());
        CHECK(max_abs(fam.x_dense(i) - scaled) < 1e-12);
        const ComplexMatrix ybuilt = (1.0 - th) * std::pow(l, (1.0 - th) / 2.0) * dense(f.right(2 + i)) +
                                     th * std::pow(l, -th / 2.0) * dense(f.right(i)).adjoint();
        CHECK(max_abs(fam.y_dense(i) - ybuilt) < 1e-14);
    }
    CHECK_THROWS(CircularFamily::build(f, th, {1.0}));
    CHECK_THROWS(CircularFamily::build(f, th, {1.0, -1.0}));
}

TEST_CASE("vacuum state values") {
    const TruncatedFock f(2, 3);
    const double th = 0.35;
    const std::vector<double> lam{0.8, 1.9};
    const auto fam = CircularFamily::build(f, th, lam);
    CHECK(std::abs(vacuum_state(f, ComplexMatrix::Identity(f.dim(), f.dim())) - Complex(1.0, 0.0)) < 1e-15);
    for (int i = 0; i < 2; ++i) {
        const Complex yx = vacuum_state(f, fam.y_dense(i) * fam.x_dense(i));
        CHECK(std::abs(yx - Complex(th * (1.0 - th), 0.0)) < 1e-14);
        const Complex xx = vacuum_state(f, fam.x_dense(i).adjoint() * fam.x_dense(i));
        CHECK(std::abs(xx - Complex((1.0 - th) * (1.0 - th) * std::pow(lam[static_cast<std::size_t>(i)], th), 0.0)) < 1e-14);
    }
}

TEST_CASE("left and right generators commute below the cutoff") {
    const TruncatedFock f(2, 4);
    const auto fam = CircularFamily::build(f, 0.4, {0.7, 1.3});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const ComplexMatrix xi = fam.x_dense(i), yj = fam.y_dense(j);
            // total degree 2: exact on words of length <= d - 2
            CHECK(max_abs((xi * yj - yj * xi) * dense(f.degree_projection(3))) < 1e-14);
            const ComplexMatrix xx = xi * fam.x_dense(1 - i);
            CHECK(max_abs((xx * yj - yj * xx) * dense(f.degree_projection(2))) < 1e-14);
        }
}

TEST_CASE("modular group on monomials") {
    const TruncatedFock f(2, 4);
    const auto fam = CircularFamily::build(f, 0.3, {0.5, 2.0});
    const Monomial w{{1.0, 0.0}, {{0, false}, {1, true}, {1, false}}};
    const Monomial id = modular_apply(fam, Complex(0.0, 0.0), w);
    CHECK(std::abs(id.scalar - Complex(1.0, 0.0)) < 1e-15);

    // sigma_t against conjugation by the first quantization, t = 0.37
    const ComplexVector u = modular_unitary_diagonal(fam, 0.37);
    CHECK(max_abs(u.cwiseAbs() - RealVector::Ones(u.size()).cast<Complex>()) < 1e-14);
    for (const Monomial& m : {Monomial{{1.0, 0.0}, {{0, false}}}, Monomial{{1.0, 0.0}, {{1, true}}}, w}) {
        const Monomial s = modular_apply(fam, Complex(0.37, 0.0), m);
        const ComplexMatrix lhs = u.asDiagonal() * monomial_matrix(fam, m) * u.conjugate().asDiagonal();
        CHECK(max_abs(lhs - s.scalar * monomial_matrix(fam, m)) < 1e-10);
    }

    // KMS condition phi(sigma_i(x) y) = phi(y x) for monomials of degree <= 2
    std::vector<Monomial> words;
    for (int a = 0; a < 2; ++a)
        for (bool ad : {false, true}) {
            words.push_back({{1.0, 0.0}, {{a, ad}}});
            for (int b = 0; b < 2; ++b)
                for (bool bd : {false, true}) words.push_back({{1.0, 0.0}, {{a, ad}, {b, bd}}});
        }
    // phi(AB) = <A (B Omega), Omega>
    std::vector<ComplexMatrix> mats;
    std::vector<ComplexVector> on_vac;
    for (const auto& x : words) {
        mats.push_back(monomial_matrix(fam, x));
        on_vac.push_back(mats.back() * f.vacuum());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            const Monomial sx = modular_apply(fam, Complex(0.0, 1.0), words[i]);
            const Complex lhs = sx.scalar * (mats[i] * on_vac[j])[0];
            const Complex rhs = (mats[j] * on_vac[i])[0];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    CHECK(std::abs(vacuum_state(f, mats[1] * mats[2]) - (mats[1] * on_vac[2])[0]) < 1e-15);
    CHECK(worst < 1e-12);
    CHECK_THROWS(modular_apply(fam, Complex(0.1, 0.0), Monomial{{1.0, 0.0}, {{2, false}}}));
}

TEST_CASE("modular norm of the generator span") {
    const TruncatedFock f(3, 1);
    for (double th : {0.2, 0.5, 0.7}) {
        const auto fam = CircularFamily::build(f, th, {0.3, 1.0, 4.0});
        const double c = fam.params.c_theta;
        CHECK(l_theta_norm(fam, ComplexVector::Unit(3, 0)) == doctest::Approx(1.0 / c).epsilon(1e-13));
        CHECK(l_theta_norm(fam, ComplexVector::Zero(3)) == 0.0);
        Rng rng = substream(32, 0);
        const ComplexVector z = random_gaussian(3, 1, rng).col(0);
        CHECK(l_theta_norm(fam, z) == doctest::Approx(z.norm() / c).epsilon(1e-13));
    }
}

TEST_CASE("the projection P") {
    const TruncatedFock f(2, 3);
    const auto fam = CircularFamily::build(f, 0.4, {0.9, 1.4});
    for (int i = 0; i < 2; ++i) CHECK(max_abs(projection_P(f, fam.x_dense(i)) - fam.x_dense(i)) < 1e-15);
    const ComplexMatrix l12 = dense(f.left(0)) * dense(f.left(1));
    CHECK(max_abs(projection_P(f, l12)) == 0.0);
    Rng rng = substream(33, 0);
    const ComplexMatrix t = random_gaussian(f.dim(), f.dim(), rng);
    const ComplexMatrix pt = projection_P(f, t);
    CHECK(max_abs(projection_P(f, pt) - pt) < 1e-12);

    // the e-part of T Omega and the e'-part of T^* Omega are related by conj and xi for T a polynomial in x_i
    for (int k = 0; k < 5; ++k) {
        const ComplexVector c = random_gaussian(7, 1, rng).col(0);
        ComplexMatrix poly = c[0] * ComplexMatrix::Identity(f.dim(), f.dim());
        poly += c[1] * fam.x_dense(0) + c[2] * fam.x_dense(1);
        poly += c[3] * fam.x_dense(0) * fam.x_dense(1) + c[4] * fam.x_dense(1) * fam.x_dense(0);
        poly += c[5] * fam.x_dense(0) * fam.x_dense(0) + c[6] * fam.x_dense(1) * fam.x_dense(1);
        const ComplexVector to = poly * f.vacuum(), tso = poly.adjoint() * f.vacuum();
        for (int i = 0; i < 2; ++i) {
            const Complex e = to[f.word_index({i})], ep = tso[f.word_index({2 + i})];
            CHECK(std::abs(ep - fam.xi[static_cast<std::size_t>(i)] * std::conj(e)) < 1e-12);
        }
    }
}

TEST_CASE("ampliated projection is bounded by two") {
    const TruncatedFock f(1, 2);
    Rng rng = substream(34, 0);
    for (int k = 1; k <= 3; ++k)
        for (int t = 0; t < 3; ++t) {
            std::vector<ComplexMatrix> ts, bs;
            for (int j = 0; j < 2; ++j) {
                ts.push_back(random_gaussian(f.dim(), f.dim(), rng));
                bs.push_back(random_gaussian(k, k, rng));
            }
            const auto r = projection_ampliation(f, ts, bs);
            CHECK(r.lhs <= 2.0 * r.rhs + 1e-8);
        }
}

TEST_CASE("minimal tensor norms") {
    const TruncatedFock f(2, 2);
    const SparseOp id = dense(f.degree_projection(3)).sparseView();
    CHECK(min_tensor_norm(f, {{id, ComplexMatrix::Identity(2, 2)}}) == doctest::Approx(1.0).epsilon(1e-10));

    // sum l_i (x) a_i has norm ||sum a_i^* a_i||^(1/2) once the vacuum is in the domain, and grows with d
    Rng rng = substream(35, 0);
    const std::vector<ComplexMatrix> a{random_gaussian(2, 2, rng), random_gaussian(2, 2, rng)};
    const double col = column_value(a);
    double prev = 0.0;
    for (int d = 2; d <= 4; ++d) {
        const TruncatedFock g(2, d);
        const double v = min_tensor_norm(g, {{g.left(0), a[0]}, {g.left(1), a[1]}});
        CHECK(v <= col * (1.0 + 1e-10));
        CHECK(v >= col * (1.0 - 1e-10));
        // with the e' part the norm is nondecreasing in d
        const double w = min_tensor_norm(g, {{g.left(0) + SparseOp(g.left(2).adjoint()), a[0]}, {g.left(1), a[1]}});
        CHECK(w >= prev - 1e-10);
        prev = w;
    }
    // adding a generator with a zero coefficient does not change the norm, adding a term does not decrease it
    const TruncatedFock g(2, 3);
    const double one = min_tensor_norm(g, {{g.left(0), a[0]}});
    const double two = min_tensor_norm(g, {{g.left(0), a[0]}, {g.left(1), a[1]}});
    CHECK(two >= one - 1e-12);
    MinTensorOptions tiny;
    tiny.cap = 10;
    CHECK_THROWS(min_tensor_norm(g, {{g.left(0), a[0]}}, tiny));
}

TEST_CASE("factorization chain checks") {
    const TruncatedFock f(1, 3);
    for (double th : {0.2, 0.5, 0.8}) {
        const auto fam = CircularFamily::build(f, th, {1.7});
        const auto rows = check_factorization_chain(fam, ComplexMatrix::Ones(1, 1));
        CHECK(all_rows_pass(rows));
        CHECK(rows[0].name == "modular_norm_equality");
        CHECK(rows[0].lhs == doctest::Approx(1.0));
        CHECK(rows[0].rhs == doctest::Approx(1.0).epsilon(1e-12));
        const auto zero = check_factorization_chain(fam, ComplexMatrix::Zero(1, 2));
        for (const auto& r : zero) {
            CHECK(r.lhs == doctest::Approx(0.0));
            CHECK(r.rhs == doctest::Approx(0.0));
        }
    }
    const TruncatedFock g(3, 3);
    Rng rng = substream(36, 0);
    std::uniform_real_distribution<double> lu(0.5, 2.0);
    const auto fam = CircularFamily::build(g, 0.3, {lu(rng), lu(rng), lu(rng)});
    std::vector<ComplexMatrix> a;
    for (int i = 0; i < 3; ++i) a.push_back(random_gaussian(2, 2, rng));
    const auto rows = check_factorization_chain(fam, random_gaussian(3, 2, rng), a);
    CHECK(rows.size() == 6);
    CHECK(all_rows_pass(rows));
}

TEST_CASE("boundary values of f_i are isometric") {
    const TruncatedFock f(2, 2);
    const auto fam = CircularFamily::build(f, 0.45, {0.4, 2.5});
    Rng rng = substream(37, 0);
    for (int k = 0; k < 5; ++k) {
        const ComplexVector al = random_gaussian(2, 1, rng).col(0);
        for (double t : {-1.0, 0.0, 0.8}) {
            CHECK(f_boundary_norm(fam, al, Complex(0.0, t)) == doctest::Approx(al.norm()).epsilon(1e-12));
            CHECK(f_boundary_norm(fam, al, Complex(1.0, t)) == doctest::Approx(al.norm()).epsilon(1e-12));
        }
    }
    CHECK_THROWS(f_boundary_norm(fam, ComplexVector::Ones(2), Complex(0.5, 0.0)));
}

TEST_CASE("the Fock realization of the weighted diagonal") {
    const TruncatedFock f(2, 4);
    Rng rng = substream(38, 0);
    for (int k = 0; k < 3; ++k) {
        const std::vector<ComplexMatrix> a{random_gaussian(2, 2, rng), random_gaussian(2, 2, rng)};
        const auto rep = delta_sandwich(f, {0.4 + k, 1.3}, a);
        CHECK(all_rows_pass(rep.rows));
    }
}

TEST_CASE("the weighted diagonal orientation matters") {
    // a_i = e_i1, small xi: the Fock side sees ||sum a_i^* a_i||^(1/2) = sqrt(n) from the l_i part
    const int n = 6;
    const TruncatedFock f(n, 1);
    std::vector<ComplexMatrix> a;
    for (int i = 0; i < n; ++i) a.push_back(matrix_unit(n, i, 0));
    const std::vector<double> xi(n, 0.01);
    const auto rep = delta_sandwich(f, xi, a);
    CHECK(all_rows_pass(rep.rows));
    CHECK(rep.formula == doctest::Approx(std::sqrt(n)).epsilon(1e-12));
    // the other orientation, max{||sum a a^*||, ||sum xi^2 a^* a||}^(1/2), evaluates to 1 and violates the lower bound
    const double other = mn_norm(MatrixElement{a, OpSpaceDescriptor::weighted_diag(xi)});
    CHECK(other == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(0.5 * rep.fock_norm > other);
}
