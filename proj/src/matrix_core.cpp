#include "opspace/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

namespace opspace {

Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

void require_finite(const ComplexMatrix& a, const char* what) {
    if (a.rows() < 1 || a.cols() < 1)
        throw std::invalid_argument(std::string(what) + ": matrix must be at least 1x1");
    if (!all_finite(a)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

HermitianSpectrum hermitian_spectrum(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_spectrum: matrix not square");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_spectrum: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

RealVector singular_values(const ComplexMatrix& a) {
    if (a.size() == 0) return RealVector();
    // Small Gram matrices are much cheaper than an SVD for wide or tall blocks.
    if (a.rows() <= 4 && a.cols() > 4 * a.rows()) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a * a.adjoint(), Eigen::EigenvaluesOnly);
        RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return ev.reverse();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues();
}

double operator_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return singular_values(a).maxCoeff();
}

double hilbert_schmidt_norm(const ComplexMatrix& a) {
    return a.norm();
}

double schatten_norm(const ComplexMatrix& a, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p must be >= 1");
    const RealVector s = singular_values(a);
    if (s.size() == 0) return 0.0;
    if (std::isinf(p)) return s.maxCoeff();
    if (p == 2.0) return a.norm();
    const double smax = s.maxCoeff();
    if (smax == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i] / smax, p);
    return smax * std::pow(acc, 1.0 / p);
}

ComplexMatrix fractional_power(const ComplexMatrix& a, double alpha) {
    if (a.rows() != a.cols()) throw std::invalid_argument("fractional_power: matrix not square");
    if (!(alpha >= 0.0)) throw std::invalid_argument("fractional_power: exponent must be >= 0");
    const double scale = operator_norm(a);
    if ((a - a.adjoint()).norm() > 1e-10 * std::max(scale, 1e-300) && scale > 0.0)
        throw std::domain_error("fractional_power: matrix is not Hermitian");
    const auto spec = hermitian_spectrum(a);
    const double floor = 1e-12 * scale;
    if (spec.eigenvalues.size() > 0 && spec.eigenvalues[0] < -1e-10 * scale)
        throw std::domain_error("fractional_power: matrix is not positive semidefinite");
    RealVector powered(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < powered.size(); ++i) {
        const double lam = spec.eigenvalues[i];
        if (lam <= floor)
            powered[i] = alpha == 0.0 ? 1.0 : 0.0;
        else
            powered[i] = alpha == 1.0 ? lam : std::pow(lam, alpha);
    }
    return spec.eigenvectors * powered.asDiagonal() * spec.eigenvectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double lp_norm(const RealVector& v, double p) {
    if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
    const double vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / vmax, p);
    return vmax * std::pow(acc, 1.0 / p);
}

namespace {

double boyd_iteration(const RealMatrix& m, RealVector x, double p, const LpNormOptions& opts) {
    const double q = p / (p - 1.0);  // dual exponent
    double nx = lp_norm(x, p);
    if (nx == 0.0) return 0.0;
    x /= nx;
    double best = lp_norm(m * x, p);
    for (int it = 0; it < opts.max_iterations; ++it) {
        RealVector y = m * x;
        const double ny = lp_norm(y, p);
        if (ny == 0.0) break;
        y /= ny;
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::pow(y[i], p - 1.0);
        RealVector z = m.transpose() * y;
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std::pow(std::max(z[i], 0.0), q - 1.0);
        const double nz = lp_norm(z, p);
        if (nz == 0.0) break;
        z /= nz;
        const double value = lp_norm(m * z, p);
        const double step = (z - x).cwiseAbs().maxCoeff();
        x = z;
        best = std::max(best, value);
        if (step <= opts.relative_tolerance) break;
    }
    return best;
}

}  // namespace

double lp_operator_norm(const RealMatrix& m, double p, const LpNormOptions& opts) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("lp_operator_norm: p must lie in (1, inf)");
    if (m.rows() != m.cols()) throw std::invalid_argument("lp_operator_norm: matrix not square");
    if (m.minCoeff() < -1e-12) throw std::invalid_argument("lp_operator_norm: negative entry");
    const RealMatrix mm = m.cwiseMax(0.0);
    const Eigen::Index n = mm.cols();
    double best = boyd_iteration(mm, RealVector::Ones(n), p, opts);
    for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, boyd_iteration(mm, RealVector::Unit(n, j), p, opts));
    for (int s = 0; s < opts.random_starts; ++s) {
        Rng rng = substream(opts.seed, static_cast<std::uint64_t>(s));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        RealVector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = u(rng);
        best = std::max(best, boyd_iteration(mm, x, p, opts));
    }
    return best;
}

double lp_operator_norm(const ComplexMatrix& m, double p, const LpNormOptions& opts) {
    if (m.imag().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("lp_operator_norm: entries must be real");
    return lp_operator_norm(RealMatrix(m.real()), p, opts);
}

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ComplexMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = Complex(g(rng), g(rng));
    return a;
}

ComplexMatrix random_psd(Eigen::Index n, Rng& rng) {
    const ComplexMatrix g = random_gaussian(n, n, rng);
    return hermitian_part(g * g.adjoint() / static_cast<double>(n));
}

ComplexMatrix random_density(Eigen::Index n, Rng& rng) {
    ComplexMatrix p = random_psd(n, rng);
    return p / p.trace().real();
}

ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
    const ComplexMatrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

ComplexMatrix unitary_exp(const ComplexMatrix& hermitian) {
    const auto spec = hermitian_spectrum(hermitian);
    ComplexVector phases(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, spec.eigenvalues[i]);
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

ComplexMatrix orthonormal_basis(const ComplexMatrix& a, double rank_tol) {
    if (a.cols() == 0) return ComplexMatrix(a.rows(), 0);
    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > rank_tol * std::max(smax, 1.0)) ++r;
    return svd.matrixU().leftCols(r);
}

double subspace_distance(const ComplexMatrix& basis_a, const ComplexMatrix& basis_b, double rank_tol) {
    const ComplexMatrix qa = orthonormal_basis(basis_a, rank_tol);
    const ComplexMatrix qb = orthonormal_basis(basis_b, rank_tol);
    const ComplexMatrix diff = qa * qa.adjoint() - qb * qb.adjoint();
    return operator_norm(diff);
}

}  // namespace opspace
