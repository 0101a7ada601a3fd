#include "opspace/strip_quotient.hpp"

#include "opspace/fock_lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opspace {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex boundary_point(double t, int line) { return Complex(static_cast<double>(line), t); }

// Combined harmonic measure density is |dw/dz| / (2 pi); each line carries half of it.
double line_density(double abs_dw) { return 2.0 * abs_dw / (2.0 * kPi); }

double tail_mass(double t_max, int line) {
    // Simpson rule on [t_max, t_max + 12]; beyond that the density is below 1e-40
    const int m = 4000;
    const double h = 12.0 / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * strip_density_cayley(t_max + i * h, line);
    }
    return acc * h / 3.0;
}

}  // namespace

double strip_density_cayley(double t, int line) {
    const Complex z = boundary_point(t, line);
    const Complex zeta = std::exp(kI * kPi * z);
    const Complex dw = 2.0 * kI / ((zeta + kI) * (zeta + kI)) * (kI * kPi * zeta);
    return line_density(std::abs(dw));
}

double strip_density_tanh(double t, int line) {
    const Complex z = boundary_point(t, line);
    const Complex s = -kI * kPi * (z - 0.5);
    const Complex sech = 1.0 / std::cosh(s / 2.0);
    const Complex dw = 0.5 * sech * sech * (-kI * kPi);
    return line_density(std::abs(dw));
}

StripQuadrature strip_nodes(int node_count, double t_max) {
    if (node_count < 2 || !(t_max > 0.0)) throw std::invalid_argument("strip_nodes: bad parameters");
    StripQuadrature q;
    q.t_max = t_max;
    q.nodes = RealVector::LinSpaced(node_count, -t_max, t_max);
    const double h = 2.0 * t_max / (node_count - 1);
    q.w0.resize(node_count);
    q.w1.resize(node_count);
    for (int j = 0; j < node_count; ++j) {
        const double end = (j == 0 || j == node_count - 1) ? 0.5 : 1.0;
        q.w0[j] = end * h * strip_density_cayley(q.nodes[j], 0);
        q.w1[j] = end * h * strip_density_cayley(q.nodes[j], 1);
        q.density_gap = std::max({q.density_gap,
                                  std::abs(strip_density_cayley(q.nodes[j], 0) - strip_density_tanh(q.nodes[j], 0)),
                                  std::abs(strip_density_cayley(q.nodes[j], 1) - strip_density_tanh(q.nodes[j], 1))});
    }
    // the densities are even in t, so each end node takes one tail
    const double tail0 = tail_mass(t_max, 0), tail1 = tail_mass(t_max, 1);
    q.w0[0] += tail0;
    q.w0[node_count - 1] += tail0;
    q.w1[0] += tail1;
    q.w1[node_count - 1] += tail1;
    return q;
}

std::vector<HarmonicTest> harmonic_test_set() {
    std::vector<HarmonicTest> set;
    set.push_back({"one", [](Complex) { return 1.0; }});
    set.push_back({"re_z", [](Complex z) { return z.real(); }});
    // exponentials shifted to sup norm 1 on the strip
    for (int k : {1, 2, -1, -2}) {
        const double shift = k > 0 ? 1.0 : 0.0;
        auto f = [k, shift](Complex z) { return std::exp(k * kPi * (z - shift)); };
        set.push_back({"re_exp" + std::to_string(k), [f](Complex z) { return f(z).real(); }});
        set.push_back({"im_exp" + std::to_string(k), [f](Complex z) { return f(z).imag(); }});
    }
    set.push_back({"re_inv", [](Complex z) { return (1.0 / (z + 1.0)).real(); }});
    set.push_back({"im_inv", [](Complex z) { return (1.0 / (z + 1.0)).imag(); }});
    return set;
}

double reproducing_error(const StripQuadrature& q) {
    double err = 0.0;
    for (const auto& h : harmonic_test_set()) {
        double integral = 0.0;
        for (Eigen::Index j = 0; j < q.nodes.size(); ++j)
            integral += 0.5 * (q.w0[j] * h.u(boundary_point(q.nodes[j], 0)) + q.w1[j] * h.u(boundary_point(q.nodes[j], 1)));
        err = std::max(err, std::abs(integral - h.u(Complex(0.5, 0.0))));
    }
    return err;
}

StripQuadrature harmonic_measure(int node_count, double t_max) {
    if (node_count < 8) throw std::invalid_argument("harmonic_measure: node count must be >= 8");
    StripQuadrature q = strip_nodes(node_count, t_max);
    if (std::abs(q.w0.sum() - 1.0) > 1e-8 || std::abs(q.w1.sum() - 1.0) > 1e-8)
        throw std::runtime_error("harmonic_measure: boundary measures do not have mass 1");
    if (q.density_gap > 1e-8) throw std::runtime_error("harmonic_measure: conformal oracles disagree");
    q.reproducing_error = reproducing_error(q);
    if (q.reproducing_error > 1e-6) throw std::runtime_error("harmonic_measure: reproducing property fails");
    return q;
}

HardyBasis HardyBasis::exponential(int D) {
    if (D < 2) throw std::invalid_argument("HardyBasis: D must be >= 2");
    HardyBasis b;
    for (int k = 0; k < D; ++k) b.beta.push_back(4.0 * (k - D / 2) / D);
    return b;
}

Complex HardyBasis::value(int k, Complex z) const { return std::exp(kPi * beta[static_cast<std::size_t>(k)] * z); }

ComplexMatrix HardyBasis::trace(const StripQuadrature& q, int line) const {
    ComplexMatrix out(q.nodes.size(), size());
    for (Eigen::Index j = 0; j < q.nodes.size(); ++j)
        for (int k = 0; k < size(); ++k) out(j, k) = value(k, boundary_point(q.nodes[j], line));
    return out;
}

ComplexVector HardyBasis::center() const {
    ComplexVector c(size());
    for (int k = 0; k < size(); ++k) c[k] = value(k, Complex(0.5, 0.0));
    return c;
}

double hardy_trace_consistency(const HardyBasis& basis, const StripQuadrature& q) {
    const ComplexMatrix t0 = basis.trace(q, 0), t1 = basis.trace(q, 1);
    const ComplexVector mean = 0.5 * (t0.transpose() * q.w0.cast<Complex>() + t1.transpose() * q.w1.cast<Complex>());
    const ComplexVector c = basis.center();
    double err = 0.0;
    for (int k = 0; k < basis.size(); ++k) {
        const double scale = std::max(t0.col(k).cwiseAbs().maxCoeff(), t1.col(k).cwiseAbs().maxCoeff());
        err = std::max(err, std::abs(mean[k] - c[k]) / scale);
    }
    return err;
}

namespace {

// Weighted traces stacked so that ||A c||^2 = ||f||^2 in L2(mu).
struct StripCoordinates {
    ComplexMatrix to_coeff;  // D x r
    ComplexMatrix r0;        // r x r, ||f|d0||_{L2(mu0)} = ||r0 u||
    ComplexMatrix r1;
    ComplexVector e;         // evaluation at 1/2 in coordinates
    ComplexMatrix w;         // 2M x r, orthonormal; coordinates of stacked weighted traces
    ComplexMatrix a;         // 2M x D
    int r = 0;
};

ComplexMatrix weight_rows(const ComplexMatrix& m, const RealVector& w, double scale) {
    ComplexMatrix out = m;
    for (Eigen::Index j = 0; j < m.rows(); ++j) out.row(j) *= std::sqrt(scale * w[j]);
    return out;
}

ComplexMatrix square_factor(const ComplexMatrix& tall) {
    if (tall.rows() >= tall.cols()) {
        Eigen::HouseholderQR<ComplexMatrix> qr(tall);
        return qr.matrixQR().topRows(tall.cols()).triangularView<Eigen::Upper>();
    }
    ComplexMatrix out = ComplexMatrix::Zero(tall.cols(), tall.cols());
    out.topRows(tall.rows()) = tall;
    return out;
}

StripCoordinates strip_coordinates(const StripQuadrature& q, const HardyBasis& basis, double rank_tol) {
    StripCoordinates sc;
    const Eigen::Index m = q.nodes.size();
    const ComplexMatrix a0 = weight_rows(basis.trace(q, 0), q.w0, 0.5);
    const ComplexMatrix a1 = weight_rows(basis.trace(q, 1), q.w1, 0.5);
    sc.a.resize(2 * m, basis.size());
    sc.a << a0, a1;
    Eigen::BDCSVD<ComplexMatrix> svd(sc.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    while (sc.r < s.size() && s[sc.r] > rank_tol * s[0]) ++sc.r;
    sc.to_coeff = svd.matrixV().leftCols(sc.r) * s.head(sc.r).cwiseInverse().asDiagonal();
    sc.w = svd.matrixU().leftCols(sc.r);
    sc.r0 = std::sqrt(2.0) * square_factor(a0 * sc.to_coeff);
    sc.r1 = std::sqrt(2.0) * square_factor(a1 * sc.to_coeff);
    sc.e = (basis.center().transpose() * sc.to_coeff).transpose();
    return sc;
}

using Coeffs = std::vector<ComplexMatrix>;  // K * r entries, index k * r + m

struct Grams {
    ComplexMatrix g0, g1;
    std::vector<ComplexMatrix> f0, f1;
};

Grams grams(const StripCoordinates& sc, const Coeffs& u, int K, int n) {
    Grams g;
    g.g0 = ComplexMatrix::Zero(n, n);
    g.g1 = ComplexMatrix::Zero(n, n);
    g.f0.assign(static_cast<std::size_t>(K * sc.r), ComplexMatrix::Zero(n, n));
    g.f1 = g.f0;
    for (int k = 0; k < K; ++k)
        for (int a = 0; a < sc.r; ++a) {
            ComplexMatrix& x0 = g.f0[static_cast<std::size_t>(k * sc.r + a)];
            ComplexMatrix& x1 = g.f1[static_cast<std::size_t>(k * sc.r + a)];
            for (int m = 0; m < sc.r; ++m) {
                const ComplexMatrix& c = u[static_cast<std::size_t>(k * sc.r + m)];
                if (sc.r0(a, m) != 0.0) x0 += sc.r0(a, m) * c;
                if (sc.r1(a, m) != 0.0) x1 += sc.r1(a, m) * c;
            }
            g.g0 += x0 * x0.adjoint();
            g.g1 += x1.adjoint() * x1;
        }
    return g;
}

double lmax(const ComplexMatrix& h) { return hermitian_spectrum(h).eigenvalues.maxCoeff(); }

double exact_objective(const StripCoordinates& sc, const Coeffs& u, int K, int n) {
    const Grams g = grams(sc, u, K, n);
    return std::sqrt(std::max(0.0, std::max(lmax(g.g0), lmax(g.g1))));
}

// (1/beta) log(tr e^(beta G0) + tr e^(beta G1)) and its gradient with respect to conj(u).
double smoothed(const StripCoordinates& sc, const Coeffs& u, int K, int n, double beta, Coeffs* grad) {
    const Grams g = grams(sc, u, K, n);
    const HermitianSpectrum s0 = hermitian_spectrum(g.g0), s1 = hermitian_spectrum(g.g1);
    const double top = std::max(s0.eigenvalues.maxCoeff(), s1.eigenvalues.maxCoeff());
    const RealVector e0 = (beta * (s0.eigenvalues.array() - top)).exp().matrix();
    const RealVector e1 = (beta * (s1.eigenvalues.array() - top)).exp().matrix();
    const double z = e0.sum() + e1.sum();
    const double value = top + std::log(z) / beta;
    if (grad) {
        const ComplexMatrix p0 = s0.eigenvectors * (e0 / z).cast<Complex>().asDiagonal() * s0.eigenvectors.adjoint();
        const ComplexMatrix p1 = s1.eigenvectors * (e1 / z).cast<Complex>().asDiagonal() * s1.eigenvectors.adjoint();
        grad->assign(u.size(), ComplexMatrix::Zero(n, n));
        for (int k = 0; k < K; ++k)
            for (int a = 0; a < sc.r; ++a) {
                const ComplexMatrix h0 = p0 * g.f0[static_cast<std::size_t>(k * sc.r + a)];
                const ComplexMatrix h1 = g.f1[static_cast<std::size_t>(k * sc.r + a)] * p1;
                for (int m = 0; m < sc.r; ++m) {
                    ComplexMatrix& gm = (*grad)[static_cast<std::size_t>(k * sc.r + m)];
                    if (sc.r0(a, m) != 0.0) gm += std::conj(sc.r0(a, m)) * h0;
                    if (sc.r1(a, m) != 0.0) gm += std::conj(sc.r1(a, m)) * h1;
                }
            }
    }
    return value;
}

// Removes the component that would change f(1/2).
void project_tangent(const StripCoordinates& sc, Coeffs& d, int K) {
    const double e2 = sc.e.squaredNorm();
    for (int k = 0; k < K; ++k) {
        ComplexMatrix acc = ComplexMatrix::Zero(d.front().rows(), d.front().cols());
        for (int m = 0; m < sc.r; ++m) acc += sc.e[m] * d[static_cast<std::size_t>(k * sc.r + m)];
        for (int m = 0; m < sc.r; ++m) d[static_cast<std::size_t>(k * sc.r + m)] -= std::conj(sc.e[m]) / e2 * acc;
    }
}

// Adds the smallest correction making f(1/2) = x.
void impose_center(const StripCoordinates& sc, Coeffs& u, const std::vector<ComplexMatrix>& x) {
    const double e2 = sc.e.squaredNorm();
    const int K = static_cast<int>(x.size());
    for (int k = 0; k < K; ++k) {
        ComplexMatrix acc = x[static_cast<std::size_t>(k)];
        for (int m = 0; m < sc.r; ++m) acc -= sc.e[m] * u[static_cast<std::size_t>(k * sc.r + m)];
        for (int m = 0; m < sc.r; ++m) u[static_cast<std::size_t>(k * sc.r + m)] += std::conj(sc.e[m]) / e2 * acc;
    }
}

double coeff_norm_sq(const Coeffs& c) {
    double s = 0.0;
    for (const auto& m : c) s += m.squaredNorm();
    return s;
}

}  // namespace

QuotientResult quotient_oh_norm(const std::vector<ComplexMatrix>& x, const StripQuadrature& q, const HardyBasis& basis,
                                const QuotientOptions& opts, const HardyElement* warm) {
    if (x.empty()) throw std::invalid_argument("quotient_oh_norm: empty target");
    const int K = static_cast<int>(x.size());
    const int n = static_cast<int>(x.front().rows());
    for (const auto& xk : x) {
        if (xk.rows() != n || xk.cols() != n) throw std::invalid_argument("quotient_oh_norm: blocks must be n x n");
        require_finite(xk, "quotient_oh_norm");
    }
    const int D = basis.size();
    if (static_cast<double>(n) * n * K * D > opts.cap) throw std::invalid_argument("quotient_oh_norm: problem exceeds cap");
    QuotientResult res;
    res.f.n = n;
    res.f.K = K;
    res.f.beta = basis.beta;
    res.f.coeff.assign(static_cast<std::size_t>(K * D), ComplexMatrix::Zero(n, n));
    const StripCoordinates sc = strip_coordinates(q, basis, opts.rank_tol);
    res.effective_dim = sc.r;
    if (sc.e.norm() < 1e-12) {
        res.feasible = false;
        res.diagnostic = "basis cannot interpolate at 1/2";
        return res;
    }
    double xnorm = 0.0;
    for (const auto& xk : x) xnorm += xk.squaredNorm();
    if (xnorm == 0.0) return res;

    Coeffs u(static_cast<std::size_t>(K * sc.r), ComplexMatrix::Zero(n, n));
    impose_center(sc, u, x);
    double best = exact_objective(sc, u, K, n);
    if (warm) {
        if (warm->n != n || warm->K != K) throw std::invalid_argument("quotient_oh_norm: warm start has wrong shape");
        HardyBasis wb{warm->beta};
        const Eigen::Index m = q.nodes.size();
        ComplexMatrix stacked(2 * m, wb.size());
        stacked << weight_rows(wb.trace(q, 0), q.w0, 0.5), weight_rows(wb.trace(q, 1), q.w1, 0.5);
        const ComplexMatrix proj = sc.w.adjoint() * stacked;  // r x Dw
        Coeffs v(u.size(), ComplexMatrix::Zero(n, n));
        for (int k = 0; k < K; ++k)
            for (int mm = 0; mm < sc.r; ++mm)
                for (int b = 0; b < wb.size(); ++b)
                    v[static_cast<std::size_t>(k * sc.r + mm)] += proj(mm, b) * warm->coeff[static_cast<std::size_t>(k * wb.size() + b)];
        impose_center(sc, v, x);
        const double wv = exact_objective(sc, v, K, n);
        if (wv < best) {
            best = wv;
            u = v;
        }
    }
    // work at unit scale
    const double scale = best;
    for (auto& c : u) c /= scale;
    Coeffs best_u = u;
    double best_unit = 1.0;
    std::vector<ComplexMatrix> xs = x;
    for (auto& xk : xs) xk /= scale;

    Coeffs grad, trial;
    for (double beta : opts.betas) {
        double step = 1.0 / beta;
        double f = smoothed(sc, u, K, n, beta, &grad);
        for (int it = 0; it < opts.iterations_per_stage; ++it) {
            project_tangent(sc, grad, K);
            const double g2 = coeff_norm_sq(grad);
            if (g2 < 1e-24) break;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                trial = u;
                for (std::size_t i = 0; i < u.size(); ++i) trial[i] -= step * grad[i];
                impose_center(sc, trial, xs);
                const double ft = smoothed(sc, trial, K, n, beta, nullptr);
                if (ft <= f - 1e-4 * step * 2.0 * g2) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            u = trial;
            f = smoothed(sc, u, K, n, beta, &grad);
            const double ex = exact_objective(sc, u, K, n);
            if (ex < best_unit) {
                best_unit = ex;
                best_u = u;
            }
            step *= 2.0;
        }
        u = best_u;
    }
    const Grams g = grams(sc, best_u, K, n);
    res.row_norm = scale * std::sqrt(std::max(0.0, lmax(g.g0)));
    res.col_norm = scale * std::sqrt(std::max(0.0, lmax(g.g1)));
    res.value = std::max(res.row_norm, res.col_norm);
    for (int k = 0; k < K; ++k)
        for (int b = 0; b < D; ++b) {
            ComplexMatrix& c = res.f.coeff[static_cast<std::size_t>(k * D + b)];
            for (int mm = 0; mm < sc.r; ++mm) c += scale * sc.to_coeff(b, mm) * best_u[static_cast<std::size_t>(k * sc.r + mm)];
        }
    return res;
}

GraphOperator graph_operator_T(const StripQuadrature& q, const HardyBasis& basis) {
    if (basis.size() < 2) throw std::invalid_argument("graph_operator_T: D must be >= 2");
    GraphOperator out;
    const ComplexMatrix a0 = weight_rows(basis.trace(q, 0), q.w0, 1.0);
    const ComplexMatrix a1 = weight_rows(basis.trace(q, 1), q.w1, 1.0);
    Eigen::BDCSVD<ComplexMatrix> svd(a0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s[r] > 1e-12 * s[0]) ++r;
    out.dropped = basis.size() - r;
    if (out.dropped > 0)
        out.warning = "dropped " + std::to_string(out.dropped) + " directions with conditioning beyond 1e12";
    out.domain_coords = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal();
    const ComplexMatrix image = a1 * out.domain_coords;
    Eigen::BDCSVD<ComplexMatrix> isvd(image, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.lambda = isvd.singularValues();
    out.T = isvd.matrixU().adjoint() * image;
    out.U = isvd.matrixV().adjoint();
    return out;
}

double constant_transfer_ratio(const StripQuadrature& q, const HardyBasis& basis) {
    const auto it = std::find(basis.beta.begin(), basis.beta.end(), 0.0);
    if (it == basis.beta.end()) throw std::invalid_argument("constant_transfer_ratio: basis lacks constants");
    const GraphOperator g = graph_operator_T(q, basis);
    const Eigen::Index k = it - basis.beta.begin();
    const ComplexVector ek = ComplexVector::Unit(basis.size(), k);
    const ComplexVector u = g.domain_coords.completeOrthogonalDecomposition().solve(ek);
    return (g.T * u).norm() / u.norm();
}

int quotient_kernel_dimension(const StripQuadrature& q, const HardyBasis& basis, int K, int& effective_dim) {
    if (K < 1) throw std::invalid_argument("quotient_kernel_dimension: K must be >= 1");
    const StripCoordinates sc = strip_coordinates(q, basis, 1e-10);
    effective_dim = sc.r;
    const ComplexMatrix eval = kron(ComplexMatrix::Identity(K, K), sc.e.transpose());
    Eigen::JacobiSVD<ComplexMatrix> svd(eval);
    const RealVector& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > 1e-10 * std::max(1.0, s[0])) ++rank;
    return K * sc.r - rank;
}

PoissonReport poisson_mean_bound(const StripQuadrature& q, const ComplexVector& on_d0, const ComplexVector& on_d1,
                                 Complex center) {
    if (on_d0.size() != q.nodes.size() || on_d1.size() != q.nodes.size())
        throw std::invalid_argument("poisson_mean_bound: samples must match the nodes");
    PoissonReport r;
    r.lhs = std::abs(center);
    r.rhs = 0.5 * (q.w0.dot(on_d0.cwiseAbs()) + q.w1.dot(on_d1.cwiseAbs()));
    r.slack = r.rhs - r.lhs;
    return r;
}

QuantizationReport quantization_bridge(int nodes_per_line, int d, int samples, std::uint64_t seed) {
    if (nodes_per_line < 1 || d < 1 || samples < 1) throw std::invalid_argument("quantization_bridge: bad parameters");
    StripQuadrature q = strip_nodes(std::max(2, nodes_per_line), 6.0);
    q.w0 /= q.w0.sum();
    q.w1 /= q.w1.sum();
    const int N = static_cast<int>(q.nodes.size());
    const TruncatedFock fock(N, d);
    const HardyBasis basis = HardyBasis::exponential(8);
    const ComplexMatrix t0 = basis.trace(q, 0), t1 = basis.trace(q, 1);
    RealVector c0(N), c1(N);
    for (int j = 0; j < N; ++j) {
        c0[j] = std::sqrt(q.w0[j] / 2.0);
        c1[j] = std::sqrt(q.w1[j] / 2.0);
    }
    // boundary vector of f in H: first N coordinates on d0, last N on d1
    auto boundary = [&](const ComplexVector& coeff) {
        ComplexVector h(2 * N);
        h.head(N) = c0.cast<Complex>().cwiseProduct(t0 * coeff);
        h.tail(N) = c1.cast<Complex>().cwiseProduct(t1 * coeff);
        return h;
    };
    auto j_map = [&](const ComplexVector& h) {
        ComplexVector out(2 * N);
        out.head(N) = h.head(N).conjugate();
        out.tail(N) = h.tail(N);
        return out;
    };
    auto s_map = [&](const ComplexVector& h) {
        const ComplexMatrix l = fock.creation(h, Side::Left);
        return ComplexMatrix(l + l.adjoint());
    };
    QuantizationReport rep;
    for (int sidx = 0; sidx < samples; ++sidx) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(sidx));
        const ComplexVector f = boundary(random_gaussian(basis.size(), 1, rng).col(0));
        const ComplexVector g = boundary(random_gaussian(basis.size(), 1, rng).col(0));
        ComplexVector lower = ComplexVector::Zero(2 * N), upper = ComplexVector::Zero(2 * N);
        lower.head(N) = f.head(N).conjugate();
        upper.tail(N) = f.tail(N);
        const ComplexMatrix t = fock.creation(lower, Side::Left).adjoint() + fock.creation(upper, Side::Left);
        const ComplexMatrix rhs = s_map(j_map(f)) - kI * s_map(j_map(kI * f));
        rep.identity_error = std::max(rep.identity_error, (2.0 * t - rhs).cwiseAbs().maxCoeff());
        rep.isometry_error = std::max(rep.isometry_error, std::abs(j_map(f).norm() - f.norm()));
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        const double a = unif(rng), b = unif(rng);
        rep.linearity_error =
            std::max(rep.linearity_error, (j_map(a * f + b * g) - a * j_map(f) - b * j_map(g)).cwiseAbs().maxCoeff());
    }
    const std::string anchor = "quantization of boundary data";
    rep.rows.push_back(check_eq("strip", "quantization_identity", rep.identity_error, 0.0, 1e-10, anchor));
    rep.rows.push_back(check_eq("strip", "j_isometry", rep.isometry_error, 0.0, 1e-10, anchor));
    rep.rows.push_back(check_eq("strip", "j_real_linear", rep.linearity_error, 0.0, 1e-10, anchor));
    return rep;
}

}  // namespace opspace
