#include "opspace/fock_lab.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace opspace {

TruncatedFock::TruncatedFock(int n, int d) : n_(n), d_(d) {
    if (n < 1) throw std::invalid_argument("TruncatedFock: need at least one generator");
    if (d < 1) throw std::invalid_argument("TruncatedFock: cutoff must be >= 1");
    const Eigen::Index L = 2 * n;
    offsets_.push_back(0);
    Eigen::Index block = 1;
    for (int k = 0; k <= d; ++k) {
        offsets_.push_back(offsets_.back() + block);
        block *= L;
    }
    const Eigen::Index N = dim();
    for (int a = 0; a < 2 * n; ++a) {
        std::vector<Eigen::Triplet<Complex>> lt, rt;
        Eigen::Index width = 1;  // L^k
        for (int k = 0; k < d; ++k) {
            for (Eigen::Index r = 0; r < width; ++r) {
                const Eigen::Index from = offsets_[static_cast<std::size_t>(k)] + r;
                lt.emplace_back(offsets_[static_cast<std::size_t>(k + 1)] + a * width + r, from, 1.0);
                rt.emplace_back(offsets_[static_cast<std::size_t>(k + 1)] + r * L + a, from, 1.0);
            }
            width *= L;
        }
        SparseOp l(N, N), r(N, N);
        l.setFromTriplets(lt.begin(), lt.end());
        r.setFromTriplets(rt.begin(), rt.end());
        left_.push_back(std::move(l));
        right_.push_back(std::move(r));
    }
}

Eigen::Index TruncatedFock::closed_form_dim(int n, int d) {
    const double L = 2.0 * n;
    if (L == 1.0) return d + 1;
    return static_cast<Eigen::Index>(std::llround((std::pow(L, d + 1) - 1.0) / (L - 1.0)));
}

Eigen::Index TruncatedFock::word_index(const std::vector<int>& w) const {
    const int k = static_cast<int>(w.size());
    if (k > d_) throw std::out_of_range("word longer than the cutoff");
    Eigen::Index r = 0;
    for (int letter : w) {
        if (letter < 0 || letter >= letters()) throw std::out_of_range("letter out of range");
        r = r * letters() + letter;
    }
    return offsets_[static_cast<std::size_t>(k)] + r;
}

int TruncatedFock::degree(Eigen::Index index) const {
    if (index < 0 || index >= dim()) throw std::out_of_range("basis index out of range");
    int k = 0;
    while (offsets_[static_cast<std::size_t>(k + 1)] <= index) ++k;
    return k;
}

std::vector<int> TruncatedFock::word(Eigen::Index index) const {
    const int k = degree(index);
    Eigen::Index r = index - offsets_[static_cast<std::size_t>(k)];
    std::vector<int> w(static_cast<std::size_t>(k));
    for (int j = k - 1; j >= 0; --j) {
        w[static_cast<std::size_t>(j)] = static_cast<int>(r % letters());
        r /= letters();
    }
    return w;
}

SparseOp TruncatedFock::creation_sparse(const ComplexVector& h, Side side) const {
    if (h.size() != letters()) throw std::invalid_argument("creation: vector must have 2n entries");
    SparseOp out(dim(), dim());
    for (int a = 0; a < letters(); ++a)
        if (h[a] != Complex(0.0)) out += h[a] * (side == Side::Left ? left(a) : right(a));
    return out;
}

ComplexMatrix TruncatedFock::creation(const ComplexVector& h, Side side) const {
    return ComplexMatrix(creation_sparse(h, side));
}

SparseOp TruncatedFock::degree_projection(int k) const {
    SparseOp p(dim(), dim());
    const Eigen::Index top = offsets_[static_cast<std::size_t>(std::clamp(k, 0, d_ + 1))];
    std::vector<Eigen::Triplet<Complex>> t;
    for (Eigen::Index i = 0; i < top; ++i) t.emplace_back(i, i, 1.0);
    p.setFromTriplets(t.begin(), t.end());
    return p;
}

ComplexVector TruncatedFock::vacuum() const {
    ComplexVector v = ComplexVector::Zero(dim());
    v[0] = 1.0;
    return v;
}

CircularFamily CircularFamily::build(const TruncatedFock& fock, double theta, std::vector<double> lambdas) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("circular family needs 0 < theta < 1");
    if (static_cast<int>(lambdas.size()) != fock.generators())
        throw std::invalid_argument("one lambda per generator required");
    CircularFamily f;
    f.fock = &fock;
    f.params = ThetaParams::make(theta);
    const int n = fock.generators();
    for (double l : lambdas)
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambdas must be positive");
    f.lambdas = std::move(lambdas);
    for (int i = 0; i < n; ++i) {
        const double l = f.lambdas[static_cast<std::size_t>(i)];
        f.xi.push_back(theta / (1.0 - theta) / std::sqrt(l));
        SparseOp xi = (1.0 - theta) * std::pow(l, theta / 2.0) * fock.left(i) +
                      theta * std::pow(l, -(1.0 - theta) / 2.0) * SparseOp(fock.left(n + i).adjoint());
        SparseOp yi = (1.0 - theta) * std::pow(l, (1.0 - theta) / 2.0) * fock.right(n + i) +
                      theta * std::pow(l, -theta / 2.0) * SparseOp(fock.right(i).adjoint());
        f.x.push_back(std::move(xi));
        f.y.push_back(std::move(yi));
    }
    return f;
}

Complex vacuum_state(const TruncatedFock& fock, const ComplexMatrix& t) {
    if (t.rows() != fock.dim() || t.cols() != fock.dim()) throw std::invalid_argument("vacuum_state: size mismatch");
    return t(0, 0);
}

Monomial modular_apply(const CircularFamily& family, Complex z, const Monomial& word) {
    Monomial out = word;
    const Complex two_i_z = Complex(0.0, 2.0) * z;
    for (const auto& l : word.letters) {
        if (l.generator < 0 || l.generator >= static_cast<int>(family.xi.size()))
            throw std::invalid_argument("modular_apply: unknown generator");
        const double lx = std::log(family.xi[static_cast<std::size_t>(l.generator)]);
        out.scalar *= std::exp((l.adjoint ? -1.0 : 1.0) * two_i_z * lx);
    }
    return out;
}

ComplexMatrix monomial_matrix(const CircularFamily& family, const Monomial& word) {
    const Eigen::Index N = family.fock->dim();
    SparseOp acc(N, N);
    acc.setIdentity();
    for (const auto& l : word.letters) {
        if (l.generator < 0 || l.generator >= static_cast<int>(family.x.size()))
            throw std::invalid_argument("monomial_matrix: unknown generator");
        const SparseOp& g = family.x[static_cast<std::size_t>(l.generator)];
        acc = l.adjoint ? SparseOp(acc * SparseOp(g.adjoint())) : SparseOp(acc * g);
    }
    return word.scalar * ComplexMatrix(acc);
}

ComplexVector modular_unitary_diagonal(const CircularFamily& family, double t) {
    const TruncatedFock& fock = *family.fock;
    const int n = fock.generators();
    std::vector<Complex> phase(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        const double lx = std::log(family.xi[static_cast<std::size_t>(j)]);
        phase[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * t * lx);
        phase[static_cast<std::size_t>(n + j)] = std::polar(1.0, -2.0 * t * lx);
    }
    ComplexVector diag(fock.dim());
    for (Eigen::Index idx = 0; idx < fock.dim(); ++idx) {
        Complex p(1.0, 0.0);
        for (int letter : fock.word(idx)) p *= phase[static_cast<std::size_t>(letter)];
        diag[idx] = p;
    }
    return diag;
}

double l_theta_norm(const CircularFamily& family, const ComplexVector& z) {
    if (z.size() != static_cast<Eigen::Index>(family.x.size()))
        throw std::invalid_argument("l_theta_norm: element must lie in the generator span");
    const double th = family.params.theta;
    ComplexVector v = ComplexVector::Zero(family.fock->dim());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (z[j] == Complex(0.0)) continue;
        const double scale = std::pow(family.xi[static_cast<std::size_t>(j)], th);
        v += (z[j] * scale) * ComplexVector(family.x[static_cast<std::size_t>(j)].col(0));
    }
    return v.norm();
}

double r_one_minus_theta_norm(const CircularFamily& family, const ComplexVector& w) {
    if (w.size() != static_cast<Eigen::Index>(family.y.size()))
        throw std::invalid_argument("r_one_minus_theta_norm: element must lie in the generator span");
    const double s = 1.0 - family.params.theta;
    ComplexVector v = ComplexVector::Zero(family.fock->dim());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w[j] == Complex(0.0)) continue;
        const double scale = std::pow(family.xi[static_cast<std::size_t>(j)], s);
        v += (w[j] * scale) * ComplexVector(family.y[static_cast<std::size_t>(j)].col(0));
    }
    return v.norm();
}

ComplexMatrix projection_P(const TruncatedFock& fock, const ComplexMatrix& t) {
    if (t.rows() != fock.dim() || t.cols() != fock.dim()) throw std::invalid_argument("projection_P: size mismatch");
    const int n = fock.generators();
    const ComplexVector t_omega = t.col(0);
    const ComplexVector ts_omega = t.row(0).adjoint();
    ComplexVector q = ComplexVector::Zero(2 * n), qp = ComplexVector::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
        q[i] = t_omega[fock.word_index({i})];
        qp[n + i] = ts_omega[fock.word_index({n + i})];
    }
    return fock.creation(q, Side::Left) + fock.creation(qp, Side::Left).adjoint();
}

double min_tensor_norm(const TruncatedFock& fock, const std::vector<TensorTerm>& terms, const MinTensorOptions& opts) {
    if (terms.empty()) return 0.0;
    const Eigen::Index D = fock.dim();
    const Eigen::Index m = terms.front().coeff.rows();
    for (const auto& t : terms) {
        if (t.op.rows() != D || t.op.cols() != D) throw std::invalid_argument("min_tensor_norm: operator size mismatch");
        if (t.coeff.rows() != m || t.coeff.cols() != m) throw std::invalid_argument("min_tensor_norm: coefficient size mismatch");
    }
    if (D * m > opts.cap) throw std::length_error("min_tensor_norm: dimension cap exceeded");
    if (D * m <= opts.dense_limit) {
        ComplexMatrix acc = ComplexMatrix::Zero(D * m, D * m);
        for (const auto& t : terms) acc += kron(ComplexMatrix(t.op), t.coeff);
        return operator_norm(acc);
    }
    std::vector<SparseOp> adj;
    for (const auto& t : terms) adj.push_back(t.op.adjoint());
    // vec index f*m + c <-> X(f, c); (T (x) a) acts as X -> T X a^T.
    auto apply = [&](const ComplexMatrix& x) {
        ComplexMatrix y = ComplexMatrix::Zero(D, m);
        for (const auto& t : terms) y.noalias() += t.op * (x * t.coeff.transpose());
        return y;
    };
    auto apply_adj = [&](const ComplexMatrix& x) {
        ComplexMatrix y = ComplexMatrix::Zero(D, m);
        for (std::size_t i = 0; i < terms.size(); ++i) y.noalias() += adj[i] * (x * terms[i].coeff.conjugate());
        return y;
    };
    const Eigen::Index N = D * m;
    const int kmax = static_cast<int>(std::min<Eigen::Index>(opts.max_krylov, N));
    Rng rng = substream(opts.seed, 0);
    ComplexMatrix q = random_gaussian(D, m, rng);
    q /= q.norm();
    std::vector<ComplexMatrix> basis;
    std::vector<double> alpha, beta;
    double prev = -1.0, top = 0.0;
    for (int j = 0; j < kmax; ++j) {
        basis.push_back(q);
        ComplexMatrix w = apply_adj(apply(q));
        const double a = (q.conjugate().cwiseProduct(w)).sum().real();
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= (b.conjugate().cwiseProduct(w)).sum() * b;
        const double bnorm = w.norm();
        const int k = static_cast<int>(alpha.size());
        RealMatrix tri = RealMatrix::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            tri(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(tri, Eigen::EigenvaluesOnly);
        top = es.eigenvalues().maxCoeff();
        if (bnorm <= 1e-13 * std::max(1.0, top)) break;
        if (j >= 8 && std::abs(top - prev) <= 1e-14 * std::max(1.0, top)) break;
        prev = top;
        beta.push_back(bnorm);
        q = w / bnorm;
    }
    return std::sqrt(std::max(top, 0.0));
}

SparseOp f_function(const CircularFamily& family, int i, Complex z) {
    const TruncatedFock& fock = *family.fock;
    const int n = fock.generators();
    if (i < 0 || i >= n) throw std::invalid_argument("f_function: unknown generator");
    const double th = family.params.theta;
    const double ll = std::log(family.lambdas[static_cast<std::size_t>(i)]);
    const Complex pre = 1.0 / (std::exp((1.0 - z) * std::log(1.0 - th)) * std::exp(z * std::log(th)));
    const Complex c1 = pre * (1.0 - th) * std::exp(z * ll / 2.0);
    const Complex c2 = pre * th * std::exp(-(1.0 - z) * ll / 2.0);
    return c1 * fock.right(n + i) + c2 * SparseOp(fock.right(i).adjoint());
}

double f_boundary_norm(const CircularFamily& family, const ComplexVector& alpha, Complex z) {
    const TruncatedFock& fock = *family.fock;
    SparseOp acc(fock.dim(), fock.dim());
    for (Eigen::Index i = 0; i < alpha.size(); ++i) acc += alpha[i] * f_function(family, static_cast<int>(i), z);
    if (std::abs(z.real()) < 1e-15) return ComplexVector(acc.col(0)).norm();
    if (std::abs(z.real() - 1.0) < 1e-15) return ComplexVector(SparseOp(acc.adjoint()).col(0)).norm();
    throw std::invalid_argument("f_boundary_norm: z must lie on Re z = 0 or Re z = 1");
}

std::vector<CheckRow> check_factorization_chain(const CircularFamily& family, const ComplexMatrix& z,
                                           const std::vector<ComplexMatrix>& a) {
    const TruncatedFock& fock = *family.fock;
    const int n = fock.generators();
    if (z.rows() != n) throw std::invalid_argument("check_factorization_chain: z must have one row per generator");
    if (!a.empty() && static_cast<int>(a.size()) != n)
        throw std::invalid_argument("check_factorization_chain: one coefficient per generator required");
    const double th = family.params.theta;
    const double c = family.params.c_theta;
    const double z2 = z.squaredNorm();
    const ComplexVector omega = fock.vacuum();

    double l_sum = 0.0, r_sum = 0.0;
    Complex pairing(0.0, 0.0);
    for (Eigen::Index k = 0; k < z.cols(); ++k) {
        const ComplexVector zk = z.col(k);
        const ComplexVector wk = zk.conjugate();
        l_sum += std::pow(l_theta_norm(family, zk), 2);
        r_sum += std::pow(r_one_minus_theta_norm(family, wk), 2);
        ComplexVector xo = ComplexVector::Zero(fock.dim());
        for (int i = 0; i < n; ++i) xo += zk[i] * (family.x[static_cast<std::size_t>(i)] * omega);
        ComplexVector yxo = ComplexVector::Zero(fock.dim());
        for (int i = 0; i < n; ++i) yxo += wk[i] * (family.y[static_cast<std::size_t>(i)] * xo);
        pairing += yxo[0];
    }

    std::vector<CheckRow> rows;
    const double scale = std::max(1.0, z2);
    rows.push_back(check_eq("fock", "modular_norm_equality", std::sqrt(z2), c * std::sqrt(l_sum), 1e-10 * scale,
                            "equality case of the modular norm bound"));
    rows.push_back(check_eq("fock", "vacuum_pairing", pairing.real(), th * (1.0 - th) * z2, 1e-10 * scale,
                            "vacuum pairing of y(k)x(k)"));
    rows.push_back(check_eq("fock", "vacuum_pairing_imag", pairing.imag(), 0.0, 1e-10 * scale,
                            "vacuum pairing is real"));
    rows.push_back(check_le("fock", "bilinear_bound", std::abs(pairing), std::sqrt(l_sum) * std::sqrt(r_sum),
                            1e-9 * scale, "bilinear interpolation bound"));
    rows.push_back(check_le("fock", "y_side_bound", std::sqrt(r_sum),
                            std::pow(1.0 - th, th) * std::pow(th, 1.0 - th) * std::sqrt(z2), 1e-9 * std::sqrt(scale),
                            "y-side interpolation bound"));
    if (!a.empty()) {
        const Eigen::Index m = a.front().rows();
        std::vector<TensorTerm> terms;
        ComplexMatrix col = ComplexMatrix::Zero(m, m), row = ComplexMatrix::Zero(m, m);
        for (int i = 0; i < n; ++i) {
            const double l = family.lambdas[static_cast<std::size_t>(i)];
            const ComplexMatrix& ai = a[static_cast<std::size_t>(i)];
            terms.push_back({family.x[static_cast<std::size_t>(i)], ai});
            col += std::pow(l, th) * ai.adjoint() * ai;
            row += std::pow(l, th - 1.0) * ai * ai.adjoint();
        }
        const double lhs = min_tensor_norm(fock, terms);
        const double rhs = std::sqrt((1.0 - th) * operator_norm(col) + th * operator_norm(row));
        rows.push_back(check_le("fock", "triangle_upper_bound", lhs, rhs, 1e-9 * std::max(1.0, rhs),
                                "triangle and Cauchy-Schwarz upper bound"));
    }
    return rows;
}

SandwichReport delta_sandwich(const TruncatedFock& fock, const std::vector<double>& xi,
                              const std::vector<ComplexMatrix>& a, double truncation_slack) {
    const int n = fock.generators();
    if (static_cast<int>(xi.size()) != n || static_cast<int>(a.size()) != n)
        throw std::invalid_argument("delta_sandwich: need one xi and one coefficient per generator");
    std::vector<TensorTerm> terms;
    ComplexMatrix col = ComplexMatrix::Zero(a.front().rows(), a.front().cols());
    ComplexMatrix row = col;
    for (int i = 0; i < n; ++i) {
        const double x = xi[static_cast<std::size_t>(i)];
        if (!(x > 0.0)) throw std::invalid_argument("delta_sandwich: xi must be positive");
        SparseOp op = fock.left(i) + x * SparseOp(fock.left(n + i).adjoint());
        terms.push_back({std::move(op), a[static_cast<std::size_t>(i)]});
        col += a[static_cast<std::size_t>(i)].adjoint() * a[static_cast<std::size_t>(i)];
        row += x * x * a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)].adjoint();
    }
    SandwichReport rep;
    rep.fock_norm = min_tensor_norm(fock, terms);
    rep.formula = std::sqrt(std::max(operator_norm(col), operator_norm(row)));
    const std::string anchor = "Fock realization of the weighted diagonal";
    rep.rows.push_back(check_le("fock", "sandwich_lower", 0.5 * rep.fock_norm, rep.formula, 1e-9 * std::max(1.0, rep.formula), anchor));
    rep.rows.push_back(check_le("fock", "sandwich_upper", rep.formula, rep.fock_norm + truncation_slack * rep.formula, 0.0, anchor));
    return rep;
}

AmpliationReport projection_ampliation(const TruncatedFock& fock, const std::vector<ComplexMatrix>& t,
                                       const std::vector<ComplexMatrix>& b) {
    if (t.size() != b.size() || t.empty()) throw std::invalid_argument("projection_ampliation: size mismatch");
    const Eigen::Index k = b.front().rows();
    ComplexMatrix x = ComplexMatrix::Zero(fock.dim() * k, fock.dim() * k), px = x;
    for (std::size_t j = 0; j < t.size(); ++j) {
        x += kron(t[j], b[j]);
        px += kron(projection_P(fock, t[j]), b[j]);
    }
    return {operator_norm(px), operator_norm(x)};
}

}  // namespace opspace
