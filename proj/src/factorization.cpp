#include "opspace/factorization.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opspace {

void StateCertificate::validate() const {
    for (const ComplexMatrix* m : {&f, &g}) {
        if (m->rows() != m->cols() || m->rows() < 1) throw std::invalid_argument("certificate state must be square");
        if (std::abs(m->trace().real() - 1.0) > 1e-10) throw std::invalid_argument("certificate state must have trace 1");
        if (hermitian_spectrum(*m).eigenvalues.minCoeff() < -1e-10)
            throw std::invalid_argument("certificate state must be positive");
    }
    if (!(C >= 0.0)) throw std::invalid_argument("certificate constant must be nonnegative");
}

CbMapSpec CbMapSpec::full(int N, ComplexMatrix u, double theta) {
    CbMapSpec s;
    s.N = N;
    s.u_matrix = std::move(u);
    s.theta = theta;
    s.validate();
    return s;
}

CbMapSpec CbMapSpec::from_functionals(const std::vector<ComplexMatrix>& m, double theta) {
    if (m.empty()) throw std::invalid_argument("from_functionals: need at least one functional");
    const int N = static_cast<int>(m.front().rows());
    ComplexMatrix u(static_cast<Eigen::Index>(m.size()), N * N);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) u(static_cast<Eigen::Index>(i), p * N + q) = m[i](q, p);  // tr(M e_pq)
    return full(N, u, theta);
}

void CbMapSpec::validate() const {
    if (N < 1) throw std::invalid_argument("CbMapSpec: N must be >= 1");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("CbMapSpec: theta must lie in [0,1]");
    const Eigen::Index r = basis.empty() ? static_cast<Eigen::Index>(N) * N : static_cast<Eigen::Index>(basis.size());
    if (u_matrix.cols() != r || u_matrix.rows() < 1) throw std::invalid_argument("CbMapSpec: u has wrong shape");
    for (const auto& b : basis)
        if (b.rows() != N || b.cols() != N) throw std::invalid_argument("CbMapSpec: basis element has wrong size");
    if (!basis.empty()) {
        ComplexMatrix bm(static_cast<Eigen::Index>(N) * N, r);
        for (Eigen::Index j = 0; j < r; ++j) bm.col(j) = Eigen::Map<const ComplexVector>(basis[static_cast<std::size_t>(j)].data(), N * N);
        if (orthonormal_basis(bm).cols() != r) throw std::invalid_argument("CbMapSpec: basis is linearly dependent");
    }
}

ComplexMatrix CbMapSpec::basis_element(int j) const {
    if (!basis.empty()) return basis[static_cast<std::size_t>(j)];
    return matrix_unit(N, j / N, j % N);
}

ComplexMatrix CbMapSpec::element(const ComplexVector& c) const {
    ComplexMatrix a = ComplexMatrix::Zero(N, N);
    for (Eigen::Index j = 0; j < c.size(); ++j) a += c[j] * basis_element(static_cast<int>(j));
    return a;
}

ComplexVector CbMapSpec::coordinates(const ComplexMatrix& a) const {
    if (a.rows() != N || a.cols() != N) throw std::invalid_argument("coordinates: element has wrong size");
    if (basis.empty()) {
        ComplexVector c(N * N);
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) c[p * N + q] = a(p, q);
        return c;
    }
    ComplexMatrix bm(static_cast<Eigen::Index>(N) * N, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        bm.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const ComplexVector>(basis[j].data(), N * N);
    const ComplexVector va = Eigen::Map<const ComplexVector>(a.data(), N * N);
    ComplexVector c = bm.colPivHouseholderQr().solve(va);
    if ((bm * c - va).norm() > 1e-8 * std::max(1.0, va.norm()))
        throw std::invalid_argument("coordinates: element is not in the subspace");
    return c;
}

ComplexVector CbMapSpec::apply(const ComplexMatrix& a) const { return u_matrix * coordinates(a); }

LinearMapSpec CbMapSpec::as_linear_map() const {
    if (!basis.empty()) throw std::invalid_argument("as_linear_map: only the full algebra is supported");
    LinearMapSpec m;
    m.source = CbSource::algebra(N);
    m.target = OpSpaceDescriptor::rtheta(target_dim(), theta);
    m.matrix = u_matrix;
    return m;
}

PlantedMap certificate_built_map(const ComplexMatrix& f, const ComplexMatrix& g, const std::vector<ComplexMatrix>& k,
                                 double theta) {
    if (k.empty()) throw std::invalid_argument("certificate_built_map: need at least one K_i");
    const ComplexMatrix fl = fractional_power(f, (1.0 - theta) / 2.0);
    const ComplexMatrix gr = fractional_power(g, theta / 2.0);
    const Eigen::Index N = f.rows();
    std::vector<ComplexMatrix> m;
    ComplexMatrix kmat(static_cast<Eigen::Index>(k.size()), N * N);
    for (std::size_t i = 0; i < k.size(); ++i) {
        m.push_back(fl * k[i] * gr);
        kmat.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const ComplexVector>(k[i].data(), N * N).transpose();
    }
    PlantedMap out;
    out.spec = CbMapSpec::from_functionals(m, theta);
    out.planted.f = f;
    out.planted.g = g;
    out.planted.C = operator_norm(kmat);
    out.planted.theta = ThetaParams::make(theta);
    return out;
}

AmGmResult weighted_am_gm(double alpha0, double alpha1, double theta) {
    if (!(alpha0 >= 0.0 && alpha1 >= 0.0)) throw std::invalid_argument("weighted_am_gm: alphas must be nonnegative");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("weighted_am_gm: theta must lie in (0,1)");
    AmGmResult r;
    r.analytic = std::pow(alpha0, 1.0 - theta) * std::pow(alpha1, theta);
    if (alpha0 == 0.0 || alpha1 == 0.0) {
        r.value = 0.0;
        r.lambda_defined = false;
        r.lambda = alpha0 == 0.0 && alpha1 == 0.0 ? std::nan("") : (alpha0 == 0.0 ? kInf : 0.0);
        return r;
    }
    auto obj = [&](double ll) {
        const double lam = std::exp(ll);
        return (1.0 - theta) * std::pow(lam, theta) * alpha0 + theta * std::pow(lam, theta - 1.0) * alpha1;
    };
    const double center = std::log(alpha1 / alpha0);
    const double h = std::log(10.0) / 33.0;
    double best_ll = center, best = obj(center);
    for (int k = -33 * 6; k <= 33 * 6; ++k) {
        const double ll = center + k * h;
        const double v = obj(ll);
        if (v < best) {
            best = v;
            best_ll = ll;
        }
    }
    // golden-section refinement on the bracketing cells
    double lo = best_ll - h, hi = best_ll + h;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = obj(x1), f2 = obj(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = obj(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = obj(x2);
        }
    }
    const double ll = 0.5 * (lo + hi);
    if (obj(ll) < best) {
        best = obj(ll);
        best_ll = ll;
    }
    r.value = best;
    r.lambda = std::exp(best_ll);
    return r;
}

namespace {

double state_value(const ComplexMatrix& s, const ComplexMatrix& x) { return (s * x).trace().real(); }

double rhs_factor(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& a, double theta) {
    const double fa = std::max(0.0, state_value(f, a.adjoint() * a));
    const double ga = std::max(0.0, state_value(g, a * a.adjoint()));
    return std::pow(fa, (1.0 - theta) / 2.0) * std::pow(ga, theta / 2.0);
}

}  // namespace

PointwiseReport verify_pointwise(const CbMapSpec& spec, const StateCertificate& cert,
                                 const std::vector<ComplexMatrix>& samples, double tol) {
    PointwiseReport rep;
    rep.min_slack = kInf;
    const double th = spec.theta;
    for (const auto& a : samples) {
        const double lhs = spec.apply(a).norm();
        const double rhs = cert.C * rhs_factor(cert.f, cert.g, a, th);
        const double s = rhs - lhs;
        rep.slacks.push_back(s);
        rep.min_slack = std::min(rep.min_slack, s);
    }
    if (samples.empty()) rep.min_slack = 0.0;
    rep.pass = rep.min_slack >= -tol;
    return rep;
}

std::vector<CheckRow> verify_finite_criterion(const CbMapSpec& spec, const std::vector<Family>& families,
                                              double constant) {
    const double th = spec.theta;
    const double K = constant > 0.0 ? constant : ThetaParams::make(th).c_theta * spec.exactness;
    std::vector<CheckRow> rows;
    for (std::size_t k = 0; k < families.size(); ++k) {
        const Family& fam = families[k];
        if (fam.a.size() != fam.lambda.size()) throw std::invalid_argument("family: one lambda per element");
        double lhs = 0.0;
        ComplexMatrix col = ComplexMatrix::Zero(spec.N, spec.N), row = ComplexMatrix::Zero(spec.N, spec.N);
        for (std::size_t i = 0; i < fam.a.size(); ++i) {
            const ComplexMatrix& a = fam.a[i];
            const double l = fam.lambda[i];
            if (!(l > 0.0)) throw std::invalid_argument("family: lambdas must be positive");
            lhs += spec.apply(a).squaredNorm();
            col += std::pow(l, th) * a.adjoint() * a;
            row += std::pow(l, th - 1.0) * a * a.adjoint();
        }
        double rhs = 0.0;
        if (th < 1.0) rhs += (1.0 - th) * operator_norm(col);
        if (th > 0.0) rhs += th * operator_norm(row);
        rhs *= K * K;
        rows.push_back(check_le("certify", "finite_criterion_" + std::to_string(k), lhs, rhs,
                                1e-9 * std::max(1.0, rhs), "finite form of the factorization"));
    }
    return rows;
}

CheckRow verify_finite_criterion_abstract(double sum_u_sq, double column_norm, double row_norm, double theta,
                                          double constant) {
    const double rhs = constant * constant * ((1.0 - theta) * column_norm + theta * row_norm);
    return check_le("certify", "finite_criterion_abstract", sum_u_sq, rhs, 1e-9 * std::max(1.0, rhs),
                    "finite form of the factorization");
}

namespace {

struct Quadratics {
    ComplexMatrix qf;  // c^* qf c = f(a^*a)
    ComplexMatrix qg;  // c^* qg c = g(aa^*)
    ComplexMatrix w;   // c^* w c = ||u a||^2
};

ComplexMatrix basis_matrix(const CbMapSpec& spec) {
    const int N = spec.N;
    const int r = spec.source_dim();
    ComplexMatrix bm(static_cast<Eigen::Index>(N) * N, r);
    for (int j = 0; j < r; ++j) {
        const ComplexMatrix b = spec.basis_element(j);
        bm.col(j) = Eigen::Map<const ComplexVector>(b.data(), N * N);
    }
    return bm;
}

Quadratics quadratics(const CbMapSpec& spec, const ComplexMatrix& f, const ComplexMatrix& g) {
    const ComplexMatrix bm = basis_matrix(spec);
    const ComplexMatrix id = ComplexMatrix::Identity(spec.N, spec.N);
    // column-major vec: tr(a f a^*) = vec(a)^* (f^T (x) I) vec(a), tr(a^* g a) = vec(a)^* (I (x) g) vec(a)
    Quadratics q;
    q.qf = hermitian_part(bm.adjoint() * kron(f.transpose(), id) * bm);
    q.qg = hermitian_part(bm.adjoint() * kron(id, g) * bm);
    q.w = hermitian_part(spec.u_matrix.adjoint() * spec.u_matrix);
    return q;
}

struct GenEig {
    double value = 0.0;
    ComplexVector vec;
    bool finite = true;
};

// Largest mu with w - mu q not negative semidefinite, restricted to range(q).
GenEig generalized_top(const ComplexMatrix& w, const ComplexMatrix& q, const ComplexMatrix& u) {
    GenEig out;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(q);
    const RealVector& ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    const double cut = 1e-12 * std::max(top, 1e-300);
    std::vector<Eigen::Index> keep, drop;
    for (Eigen::Index i = 0; i < ev.size(); ++i) (ev[i] > cut ? keep : drop).push_back(i);
    const double unorm = std::max(u.norm(), 1e-300);
    for (Eigen::Index i : drop)
        if ((u * es.eigenvectors().col(i)).norm() > 1e-9 * unorm) {
            out.finite = false;
            out.value = kInf;
            out.vec = es.eigenvectors().col(i);
            return out;
        }
    if (keep.empty()) return out;
    ComplexMatrix v(q.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        v.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(ev[keep[j]]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> red(hermitian_part(v.adjoint() * w * v));
    const Eigen::Index last = red.eigenvalues().size() - 1;
    out.value = std::max(red.eigenvalues()[last], 0.0);
    out.vec = v * red.eigenvectors().col(last);
    return out;
}

}  // namespace

ExactConstant certificate_constant(const CbMapSpec& spec, const ComplexMatrix& f, const ComplexMatrix& g) {
    const double th = spec.theta;
    const Quadratics q = quadratics(spec, f, g);
    ExactConstant out;
    if (q.w.norm() == 0.0) {
        out.C = 0.0;
        out.worst = ComplexVector::Zero(spec.source_dim());
        return out;
    }
    auto at = [&](double ll) {
        if (th == 0.0) return generalized_top(q.w, q.qf, spec.u_matrix);
        if (th == 1.0) return generalized_top(q.w, q.qg, spec.u_matrix);
        const double lam = std::exp(ll);
        const ComplexMatrix ql = (1.0 - th) * std::pow(lam, th) * q.qf + th * std::pow(lam, th - 1.0) * q.qg;
        return generalized_top(q.w, ql, spec.u_matrix);
    };
    if (th == 0.0 || th == 1.0) {
        const GenEig e = at(0.0);
        out.C = std::sqrt(e.value);
        out.worst = e.vec;
        out.finite = e.finite;
        return out;
    }
    const double h = std::log(10.0) / 33.0;
    int lo_k = -33 * 8, hi_k = 33 * 8;
    double best = -1.0;
    int best_k = 0;
    GenEig best_e;
    auto scan = [&](int from, int to) {
        for (int k = from; k <= to; ++k) {
            const GenEig e = at(k * h);
            if (!e.finite) {
                best = kInf;
                best_e = e;
                best_k = k;
                return false;
            }
            if (e.value > best) {
                best = e.value;
                best_e = e;
                best_k = k;
            }
        }
        return true;
    };
    bool ok = scan(lo_k, hi_k);
    while (ok && (best_k == lo_k || best_k == hi_k) && hi_k < 33 * 30) {
        const int old_lo = lo_k, old_hi = hi_k;
        lo_k -= 33 * 4;
        hi_k += 33 * 4;
        ok = scan(lo_k, old_lo - 1) && scan(old_hi + 1, hi_k);
    }
    if (!ok) {
        out.C = kInf;
        out.finite = false;
        out.worst = best_e.vec;
        return out;
    }
    double a = (best_k - 1) * h, b = (best_k + 1) * h;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    GenEig e1 = at(x1), e2 = at(x2);
    for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
        if (e1.value > e2.value) {
            b = x2; x2 = x1; e2 = e1; x1 = b - gr * (b - a); e1 = at(x1);
        } else {
            a = x1; x1 = x2; e1 = e2; x2 = a + gr * (b - a); e2 = at(x2);
        }
    }
    double best_ll = best_k * h;
    for (const auto& [ll, e] : {std::pair{x1, e1}, std::pair{x2, e2}})
        if (e.value > best) {
            best = e.value;
            best_e = e;
            best_ll = ll;
        }
    out.C = std::sqrt(best);
    out.lambda = std::exp(best_ll);
    out.worst = best_e.vec;
    return out;
}

ComplexMatrix project_to_density(const ComplexMatrix& h) {
    const HermitianSpectrum sp = hermitian_spectrum(h);
    const Eigen::Index n = sp.eigenvalues.size();
    std::vector<double> v(sp.eigenvalues.data(), sp.eigenvalues.data() + n);
    std::vector<double> s = v;
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0, tau = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cum += s[static_cast<std::size_t>(k)];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (s[static_cast<std::size_t>(k)] - t > 0.0) tau = t;
    }
    RealVector proj(n);
    for (Eigen::Index i = 0; i < n; ++i) proj[i] = std::max(v[static_cast<std::size_t>(i)] - tau, 0.0);
    return sp.eigenvectors * proj.asDiagonal() * sp.eigenvectors.adjoint();
}

namespace {

struct Sample {
    ComplexMatrix a_star_a;
    ComplexMatrix a_a_star;
    double log_w;
};

class LogMaxObjective {
public:
    LogMaxObjective(const std::vector<Sample>& s, double theta) : samples_(s), theta_(theta) {}

    // smoothed value; fills gradients when requested
    double value(const ComplexMatrix& f, const ComplexMatrix& g, double beta, ComplexMatrix* gf = nullptr,
                 ComplexMatrix* gg = nullptr) const {
        std::vector<double> h(samples_.size());
        std::vector<double> tf(samples_.size()), tg(samples_.size());
        for (std::size_t j = 0; j < samples_.size(); ++j) {
            double v = samples_[j].log_w;
            if (theta_ < 1.0) {
                tf[j] = state_value(f, samples_[j].a_star_a);
                if (tf[j] <= 0.0) return kInf;
                v -= (1.0 - theta_) * std::log(tf[j]);
            }
            if (theta_ > 0.0) {
                tg[j] = state_value(g, samples_[j].a_a_star);
                if (tg[j] <= 0.0) return kInf;
                v -= theta_ * std::log(tg[j]);
            }
            h[j] = v;
        }
        const double hmax = *std::max_element(h.begin(), h.end());
        double z = 0.0;
        std::vector<double> p(h.size());
        for (std::size_t j = 0; j < h.size(); ++j) z += (p[j] = std::exp(beta * (h[j] - hmax)));
        if (gf) {
            gf->setZero(f.rows(), f.cols());
            gg->setZero(g.rows(), g.cols());
            for (std::size_t j = 0; j < h.size(); ++j) {
                const double w = p[j] / z;
                if (theta_ < 1.0) *gf -= w * (1.0 - theta_) / tf[j] * samples_[j].a_star_a;
                if (theta_ > 0.0) *gg -= w * theta_ / tg[j] * samples_[j].a_a_star;
            }
        }
        return hmax + std::log(z) / beta;
    }

    double exact(const ComplexMatrix& f, const ComplexMatrix& g) const { return value(f, g, 1e300); }

private:
    const std::vector<Sample>& samples_;
    double theta_;
};

void minimize_states(const LogMaxObjective& obj, ComplexMatrix& f, ComplexMatrix& g, int iterations) {
    // a state that vanishes on a newly added sample gives an infinite value; pull it inward
    const ComplexMatrix mixed = ComplexMatrix::Identity(f.rows(), f.cols()) / static_cast<double>(f.rows());
    for (double eps = 1e-6; !std::isfinite(obj.value(f, g, 10.0)) && eps <= 1.0; eps *= 10.0) {
        f = (1.0 - eps) * f + eps * mixed;
        g = (1.0 - eps) * g + eps * mixed;
    }
    for (double beta : {10.0, 100.0, 1e3, 1e4, 1e5}) {
        double step = 1e-2;
        ComplexMatrix gf, gg;
        double val = obj.value(f, g, beta, &gf, &gg);
        int quiet = 0;
        for (int it = 0; it < iterations; ++it) {
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                const ComplexMatrix fn = project_to_density(f - step * gf);
                const ComplexMatrix gn = project_to_density(g - step * gg);
                const double vn = obj.value(fn, gn, beta);
                const double moved = (fn - f).squaredNorm() + (gn - g).squaredNorm();
                if (vn <= val - 1e-4 * moved / step) {
                    const double drop = val - vn;
                    f = fn;
                    g = gn;
                    val = obj.value(f, g, beta, &gf, &gg);
                    step *= 1.5;
                    accepted = true;
                    quiet = drop <= 1e-13 * std::max(1.0, std::abs(val)) ? quiet + 1 : 0;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted || quiet >= 5) break;
        }
    }
}

std::vector<ComplexMatrix> random_elements(const CbMapSpec& spec, int count, Rng& rng) {
    std::vector<ComplexMatrix> out;
    for (int i = 0; i < count; ++i) {
        const ComplexVector c = random_gaussian(spec.source_dim(), 1, rng).col(0);
        ComplexMatrix a = spec.element(c);
        const double n = a.norm();
        if (n > 0.0) a /= n;
        out.push_back(a);
    }
    return out;
}

bool add_sample(const CbMapSpec& spec, const ComplexMatrix& a, std::vector<Sample>& samples) {
    const double w = spec.apply(a).squaredNorm();
    if (!(w > 1e-300)) return false;
    samples.push_back({a.adjoint() * a, a * a.adjoint(), std::log(w)});
    return true;
}

// Sampled optima sit on the boundary of the state space, where a slightly misaligned kernel makes the
// exact constant infinite; a small admixture of the maximally mixed state repairs this. Updates f, g.
ExactConstant best_mixture(const CbMapSpec& spec, ComplexMatrix& f, ComplexMatrix& g) {
    const ComplexMatrix mixed = ComplexMatrix::Identity(f.rows(), f.cols()) / static_cast<double>(f.rows());
    ExactConstant best = certificate_constant(spec, f, g);
    ComplexMatrix bf = f, bg = g;
    for (double eps = 1e-10; eps < 0.5; eps *= 3.0) {
        const ComplexMatrix fe = (1.0 - eps) * f + eps * mixed, ge = (1.0 - eps) * g + eps * mixed;
        const ExactConstant e = certificate_constant(spec, fe, ge);
        if (e.finite && (!best.finite || e.C < best.C)) {
            best = e;
            bf = fe;
            bg = ge;
        }
    }
    f = bf;
    g = bg;
    return best;
}

}  // namespace

SearchResult search_certificate(const CbMapSpec& spec, const SearchOptions& opts) {
    spec.validate();
    const int N = spec.N;
    const double th = spec.theta;
    SearchResult res;
    res.cert.theta = ThetaParams::make(th);
    ComplexMatrix f = ComplexMatrix::Identity(N, N) / static_cast<double>(N);
    ComplexMatrix g = f;
    res.cert.f = f;
    res.cert.g = g;
    Rng rng = substream(opts.seed, 0);
    if (spec.u_matrix.norm() == 0.0) {
        res.cert.C = 0.0;
        res.probe_report = verify_pointwise(spec, res.cert, random_elements(spec, opts.probes, rng));
        return res;
    }

    std::vector<Sample> samples;
    for (int j = 0; j < spec.source_dim(); ++j) add_sample(spec, spec.basis_element(j), samples);
    for (const auto& a : random_elements(spec, opts.initial_samples, rng)) add_sample(spec, a, samples);

    // keep the best certificate seen; stop once the sampled lower bound meets it or progress stalls
    ExactConstant best;
    best.finite = false;
    ComplexMatrix best_f = f, best_g = g;
    int stalled = 0;
    for (int round = 0; round < opts.max_rounds; ++round) {
        res.rounds = round + 1;
        LogMaxObjective obj(samples, th);
        minimize_states(obj, f, g, opts.inner_iterations);
        const double sample_c = std::exp(0.5 * obj.exact(f, g));
        const ExactConstant exact = best_mixture(spec, f, g);
        if (exact.finite && (!best.finite || exact.C < best.C * (1.0 - 1e-4))) {
            stalled = 0;
        } else if (++stalled >= opts.stall_rounds) {
            break;
        }
        if (exact.finite && (!best.finite || exact.C < best.C)) {
            best = exact;
            best_f = f;
            best_g = g;
        }
        if (exact.finite && exact.C <= (1.0 + opts.gap_tolerance) * sample_c) break;
        if (exact.worst.size() == 0 || !add_sample(spec, spec.element(exact.worst), samples)) break;
    }
    f = best_f;
    g = best_g;
    ExactConstant exact = best;
    if (!exact.finite) {
        // fall back to the maximally mixed states, which always give a finite constant
        f = g = ComplexMatrix::Identity(N, N) / static_cast<double>(N);
        exact = certificate_constant(spec, f, g);
    }
    res.samples = static_cast<int>(samples.size());
    res.cert.f = f;
    res.cert.g = g;
    res.cert.C = exact.C * (1.0 + 1e-6);
    Rng probe_rng = substream(opts.seed, 1);
    res.probe_report = verify_pointwise(spec, res.cert, random_elements(spec, opts.probes, probe_rng));
    if (res.cert.C > opts.target_constant) {
        res.feasible = false;
        res.gap = res.cert.C - opts.target_constant;
    }
    return res;
}

EndpointResult endpoint_certificate(const CbMapSpec& spec, EndpointSide side, const SearchOptions& opts) {
    CbMapSpec s = spec;
    s.theta = side == EndpointSide::Column ? 0.0 : 1.0;
    const SearchResult r = search_certificate(s, opts);
    EndpointResult out;
    out.state = side == EndpointSide::Column ? r.cert.f : r.cert.g;
    out.C = r.cert.C;
    out.feasible = r.feasible;
    out.gap = r.gap;
    Rng rng = substream(opts.seed, 7);
    for (int k = 0; k < 5; ++k) {
        const auto xs = random_elements(s, 3, rng);
        double lhs = 0.0;
        ComplexMatrix acc = ComplexMatrix::Zero(s.N, s.N);
        for (const auto& x : xs) {
            lhs += s.apply(x).squaredNorm();
            acc += side == EndpointSide::Row ? ComplexMatrix(x * x.adjoint()) : ComplexMatrix(x.adjoint() * x);
        }
        const double rhs = out.C * out.C * operator_norm(acc);
        out.finite_checks.push_back(check_le("certify",
                                             std::string(side == EndpointSide::Row ? "endpoint_row_" : "endpoint_column_") +
                                                 std::to_string(k),
                                             lhs, rhs, 1e-9 * std::max(1.0, rhs), "endpoint finite criterion"));
    }
    return out;
}

BlockLemmaReport block_lemma_check(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& a, int N, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("block_lemma_check: theta must lie in [0,1]");
    if (N < 1 || a.rows() != a.cols() || a.rows() % N != 0) throw std::invalid_argument("block_lemma_check: bad block shape");
    if (f.rows() != N || g.rows() != N) throw std::invalid_argument("block_lemma_check: states have wrong size");
    if (std::abs(f.trace().real() - 1.0) > 1e-10 || std::abs(g.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("block_lemma_check: states must have trace 1");
    const Eigen::Index n = a.rows() / N;
    auto alphas = [&](const ComplexMatrix& blk, RealMatrix& a0, RealMatrix& a1) {
        a0.resize(n, n);
        a1.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const ComplexMatrix b = blk.block(i * N, j * N, N, N);
                a0(i, j) = std::max(0.0, state_value(f, b.adjoint() * b));
                a1(i, j) = std::max(0.0, state_value(g, b * b.adjoint()));
            }
    };
    RealMatrix a0, a1;
    alphas(a, a0, a1);
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = std::pow(a0(i, j), 1.0 - theta) * std::pow(a1(i, j), theta);
    BlockLemmaReport rep;
    if (theta == 0.0) rep.lhs = m.colwise().sum().maxCoeff();
    else if (theta == 1.0) rep.lhs = m.rowwise().sum().maxCoeff();
    else rep.lhs = lp_operator_norm(m, 1.0 / (1.0 - theta));
    const double anorm = operator_norm(a);
    rep.rhs = anorm;
    rep.slack = rep.rhs - rep.lhs;
    RealMatrix b0, b1;
    alphas(a / std::max(1.0, anorm), b0, b1);
    rep.max_column_sum = b0.colwise().sum().maxCoeff();
    rep.max_row_sum = b1.rowwise().sum().maxCoeff();
    rep.rows.push_back(check_le("certify", "block_lp_bound", rep.lhs, rep.rhs, 1e-7, "l_p block bound"));
    rep.rows.push_back(check_le("certify", "block_column_sums", rep.max_column_sum, 1.0, 1e-9, "column sums at most one"));
    rep.rows.push_back(check_le("certify", "block_row_sums", rep.max_row_sum, 1.0, 1e-9, "row sums at most one"));
    return rep;
}

double weighted_block_sum(const CbMapSpec& spec, const ComplexMatrix& a, const RealVector& s, const RealVector& t) {
    const int N = spec.N;
    const Eigen::Index n = a.rows() / N;
    if (s.size() != n || t.size() != n) throw std::invalid_argument("weighted_block_sum: weight size mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            acc += s[i] * s[i] * spec.apply(a.block(i * N, j * N, N, N)).squaredNorm() * t[j] * t[j];
    return acc;
}

}  // namespace opspace
