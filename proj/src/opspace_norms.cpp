#include "opspace/opspace_norms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opspace {

OpSpaceDescriptor OpSpaceDescriptor::row(int n) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::Row;
    d.n = n;
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::column(int n) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::Column;
    d.n = n;
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::rtheta(int n, double theta) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::RTheta;
    d.n = n;
    d.theta = theta;
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::oh(int n) { return rtheta(n, 0.5); }

OpSpaceDescriptor OpSpaceDescriptor::rcapc(int n) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::RcapC;
    d.n = n;
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::weighted_diag(std::vector<double> xi) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::WeightedDiag;
    d.n = static_cast<int>(xi.size());
    d.weights = std::move(xi);
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::graph(std::vector<double> lambda, GraphOrientation o) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::Graph;
    d.n = static_cast<int>(lambda.size());
    d.weights = std::move(lambda);
    d.orientation = o;
    return d;
}

OpSpaceDescriptor OpSpaceDescriptor::direct_sum(std::vector<OpSpaceDescriptor> parts) {
    OpSpaceDescriptor d;
    d.kind = SpaceKind::DirectSum;
    d.summands = std::move(parts);
    d.n = 0;
    for (const auto& s : d.summands) d.n += s.dimension();
    return d;
}

int OpSpaceDescriptor::dimension() const {
    if (kind != SpaceKind::DirectSum) return n;
    int total = 0;
    for (const auto& s : summands) total += s.dimension();
    return total;
}

std::string OpSpaceDescriptor::name() const {
    std::ostringstream os;
    switch (kind) {
    case SpaceKind::Row: os << "R_" << n; break;
    case SpaceKind::Column: os << "C_" << n; break;
    case SpaceKind::RTheta: os << "R[" << theta << "]_" << n; break;
    case SpaceKind::RcapC: os << "RcapC_" << n; break;
    case SpaceKind::WeightedDiag: os << "Diag_" << n; break;
    case SpaceKind::Graph: os << (orientation == GraphOrientation::RC ? "GraphRC_" : "GraphCR_") << n; break;
    case SpaceKind::DirectSum:
        os << "Sum(";
        for (std::size_t i = 0; i < summands.size(); ++i) os << (i ? "," : "") << summands[i].name();
        os << ")";
        break;
    }
    return os.str();
}

void OpSpaceDescriptor::validate() const {
    if (kind == SpaceKind::DirectSum) {
        if (summands.empty()) throw std::invalid_argument("direct sum needs at least one summand");
        for (const auto& s : summands) s.validate();
        return;
    }
    if (n < 1) throw std::invalid_argument("descriptor dimension must be >= 1");
    if (kind == SpaceKind::RTheta && !(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta must lie in [0,1]");
    if (kind == SpaceKind::WeightedDiag || kind == SpaceKind::Graph) {
        if (static_cast<int>(weights.size()) != n) throw std::invalid_argument("weight list length mismatch");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive and finite");
    }
}

namespace {

void check_coefficients(const std::vector<ComplexMatrix>& a) {
    if (a.empty()) throw std::invalid_argument("empty coefficient list");
    const Eigen::Index m = a.front().rows();
    for (const auto& x : a) {
        if (x.rows() != m || x.cols() != m) throw std::invalid_argument("coefficients must be square of equal size");
        require_finite(x, "coefficient");
    }
}

ComplexMatrix sum_aa_star(const std::vector<ComplexMatrix>& a, const std::vector<double>* w = nullptr) {
    ComplexMatrix s = ComplexMatrix::Zero(a.front().rows(), a.front().rows());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = w ? (*w)[i] * (*w)[i] : 1.0;
        s.noalias() += c * (a[i] * a[i].adjoint());
    }
    return s;
}

ComplexMatrix sum_a_star_a(const std::vector<ComplexMatrix>& a, const std::vector<double>* w = nullptr) {
    ComplexMatrix s = ComplexMatrix::Zero(a.front().cols(), a.front().cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = w ? (*w)[i] * (*w)[i] : 1.0;
        s.noalias() += c * (a[i].adjoint() * a[i]);
    }
    return s;
}

double psd_top(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

// PSD power with negative eigenvalues clamped; result scaled so its top eigenvalue is 1.
ComplexMatrix psd_power_scaled(const ComplexMatrix& x, double alpha) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x));
    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    const double top = ev.maxCoeff();
    if (top <= 0.0) return ComplexMatrix::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double r = ev[i] / top;
        ev[i] = r <= 1e-300 ? 0.0 : std::pow(r, alpha);
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double psd_schatten(const ComplexMatrix& x, double q) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    return lp_norm(ev, q);
}

ComplexMatrix phi(const std::vector<ComplexMatrix>& a, const ComplexMatrix& t) {
    ComplexMatrix out = ComplexMatrix::Zero(a.front().rows(), a.front().rows());
    for (const auto& x : a) out.noalias() += x * t * x.adjoint();
    return out;
}

ComplexMatrix phi_adjoint(const std::vector<ComplexMatrix>& a, const ComplexMatrix& s) {
    ComplexMatrix out = ComplexMatrix::Zero(a.front().cols(), a.front().cols());
    for (const auto& x : a) out.noalias() += x.adjoint() * s * x;
    return out;
}

RThetaSolution ascend(const std::vector<ComplexMatrix>& a, double p, double pp, ComplexMatrix t,
                      const NormOptions& opts) {
    RThetaSolution sol;
    const double nt = psd_schatten(t, p);
    if (nt <= 0.0) return sol;
    t /= nt;
    double prev = -1.0;
    int stalls = 0;
    ComplexMatrix s;
    double val2 = 0.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const ComplexMatrix x = phi(a, t);
        s = psd_power_scaled(x, p - 1.0);
        const double ns = psd_schatten(s, pp);
        if (ns <= 0.0) break;
        s /= ns;
        const ComplexMatrix y = phi_adjoint(a, s);
        val2 = psd_schatten(y, pp);
        ComplexMatrix tn = psd_power_scaled(y, pp - 1.0);
        const double ntn = psd_schatten(tn, p);
        if (ntn <= 0.0) break;
        t = tn / ntn;
        if (val2 - prev <= opts.tolerance * val2) {
            if (++stalls >= 3) break;
        } else {
            stalls = 0;
        }
        prev = val2;
    }
    sol.value = std::sqrt(std::max(val2, 0.0));
    sol.s_sq = s;
    sol.t_sq = t;
    sol.iterations = it;
    sol.converged = it < opts.max_iterations;
    return sol;
}

ComplexMatrix norming_direction(const ComplexMatrix& y, double exponent) {
    Eigen::JacobiSVD<ComplexMatrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealVector s = svd.singularValues();
    const double top = s.size() ? s[0] : 0.0;
    if (top <= 0.0) return ComplexMatrix::Zero(y.rows(), y.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double r = s[i] / top;
        s[i] = r <= 1e-300 ? 0.0 : std::pow(r, exponent);
    }
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace

double row_value(const std::vector<ComplexMatrix>& a) {
    check_coefficients(a);
    return std::sqrt(psd_top(sum_aa_star(a)));
}

double column_value(const std::vector<ComplexMatrix>& a) {
    check_coefficients(a);
    return std::sqrt(psd_top(sum_a_star_a(a)));
}

double oh_closed_form(const std::vector<ComplexMatrix>& a) {
    check_coefficients(a);
    const Eigen::Index m = a.front().rows();
    ComplexMatrix acc = ComplexMatrix::Zero(m * m, m * m);
    for (const auto& x : a) acc += kron(x, x.conjugate());
    return std::sqrt(operator_norm(acc));
}

double rtheta_objective(const std::vector<ComplexMatrix>& a, const ComplexMatrix& s, const ComplexMatrix& t) {
    double acc = 0.0;
    for (const auto& x : a) acc += (s * x * t).squaredNorm();
    return std::sqrt(acc);
}

double rtheta_intro_objective(const std::vector<ComplexMatrix>& a, double theta, const ComplexMatrix& s,
                              const ComplexMatrix& t) {
    return rtheta_objective(a, fractional_power(s, theta), fractional_power(t, 1.0 - theta));
}

RThetaSolution rtheta_sup_norm(const std::vector<ComplexMatrix>& a, double theta, const NormOptions& opts,
                               const ComplexMatrix* warm_t_sq) {
    check_coefficients(a);
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("rtheta_sup_norm: theta must lie in (0,1)");
    const double p = 1.0 / (1.0 - theta);
    const double pp = 1.0 / theta;
    const Eigen::Index m = a.front().rows();
    RThetaSolution best;
    bool have = false;
    auto consider = [&](const RThetaSolution& s) {
        if (!have || s.value > best.value) {
            best = s;
            have = true;
        }
    };
    if (warm_t_sq && warm_t_sq->rows() == m) consider(ascend(a, p, pp, *warm_t_sq, opts));
    consider(ascend(a, p, pp, ComplexMatrix::Identity(m, m), opts));
    // start from S = I, i.e. T proportional to Phi^*(I)^(p'-1)
    consider(ascend(a, p, pp, psd_power_scaled(phi_adjoint(a, ComplexMatrix::Identity(m, m)), pp - 1.0), opts));
    for (int k = 2; k < opts.multistart; ++k) {
        Rng rng = substream(opts.seed, static_cast<std::uint64_t>(k));
        consider(ascend(a, p, pp, random_psd(m, rng), opts));
    }
    if (!have || best.s_sq.size() == 0) {
        best.value = 0.0;
        best.s_sq = ComplexMatrix::Identity(m, m) / std::pow(static_cast<double>(m), 1.0 / pp);
        best.t_sq = ComplexMatrix::Identity(m, m) / std::pow(static_cast<double>(m), 1.0 / p);
        best.converged = true;
    }
    return best;
}

double cp_map_schatten_norm(const std::vector<ComplexMatrix>& a, double p_prime, const NormOptions& opts) {
    check_coefficients(a);
    if (!(p_prime > 1.0) || std::isinf(p_prime))
        throw std::invalid_argument("cp_map_schatten_norm: p' must lie in (1, inf)");
    const double q = p_prime;
    const double qd = q / (q - 1.0);
    const Eigen::Index m = a.front().rows();
    double best = 0.0;
    auto run = [&](ComplexMatrix x) {
        const double nx = schatten_norm(x, q);
        if (nx <= 0.0) return;
        x /= nx;
        double prev = -1.0;
        int stalls = 0;
        for (int it = 0; it < opts.max_iterations; ++it) {
            const ComplexMatrix y = phi_adjoint(a, x);  // sum a^* x a
            const double val = schatten_norm(y, q);
            best = std::max(best, val);
            if (val <= 0.0) return;
            if (val - prev <= opts.tolerance * val) {
                if (++stalls >= 3) return;
            } else {
                stalls = 0;
            }
            prev = val;
            const ComplexMatrix w = norming_direction(y, q - 1.0);
            const ComplexMatrix z = phi(a, w);  // adjoint map under tr(A^* B)
            ComplexMatrix xn = norming_direction(z, qd - 1.0);
            const double nn = schatten_norm(xn, q);
            if (nn <= 0.0) return;
            x = xn / nn;
        }
    };
    run(ComplexMatrix::Identity(m, m));
    for (int k = 1; k < opts.multistart; ++k) {
        Rng rng = substream(opts.seed ^ 0xc0ffeeULL, static_cast<std::uint64_t>(k));
        if (k % 2) run(random_psd(m, rng));
        else run(random_gaussian(m, m, rng));
    }
    return std::sqrt(best);
}

namespace {

NormResult single_norm(const std::vector<ComplexMatrix>& a, const OpSpaceDescriptor& d, const NormOptions& opts) {
    NormResult r;
    switch (d.kind) {
    case SpaceKind::Row: r.value = row_value(a); break;
    case SpaceKind::Column: r.value = column_value(a); break;
    case SpaceKind::RcapC: r.value = std::max(row_value(a), column_value(a)); break;
    case SpaceKind::WeightedDiag:
    case SpaceKind::Graph: {
        const bool rc = d.kind == SpaceKind::WeightedDiag || d.orientation == GraphOrientation::RC;
        const double plain = std::sqrt(psd_top(rc ? sum_aa_star(a) : sum_a_star_a(a)));
        const double weighted = std::sqrt(psd_top(rc ? sum_a_star_a(a, &d.weights) : sum_aa_star(a, &d.weights)));
        r.value = std::max(plain, weighted);
        break;
    }
    case SpaceKind::RTheta: {
        if (d.theta < 1e-3) {
            r.value = column_value(a);
        } else if (d.theta > 1.0 - 1e-3) {
            r.value = row_value(a);
        } else if (d.theta == 0.5 && opts.closed_form_at_half) {
            r.value = oh_closed_form(a);
        } else {
            const RThetaSolution s = rtheta_sup_norm(a, d.theta, opts);
            r.value = s.value;
            r.converged = s.converged;
            r.stale = !s.converged;
            r.iterations = s.iterations;
        }
        break;
    }
    case SpaceKind::DirectSum: {
        std::size_t offset = 0;
        std::vector<double> values;
        for (const auto& part : d.summands) {
            const std::size_t len = static_cast<std::size_t>(part.dimension());
            std::vector<ComplexMatrix> slice(a.begin() + static_cast<long>(offset),
                                             a.begin() + static_cast<long>(offset + len));
            const NormResult sub = single_norm(slice, part, opts);
            values.push_back(sub.value);
            r.converged = r.converged && sub.converged;
            r.stale = r.stale || sub.stale;
            offset += len;
        }
        r.value = *std::max_element(values.begin(), values.end());
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] >= r.value - 1e-12 * std::max(1.0, r.value)) r.argmax.push_back(static_cast<int>(i));
        break;
    }
    }
    return r;
}

}  // namespace

NormResult mn_norm_detail(const MatrixElement& x, const NormOptions& opts) {
    x.space.validate();
    check_coefficients(x.coefficients);
    if (static_cast<int>(x.coefficients.size()) != x.space.dimension())
        throw std::invalid_argument("coefficient count does not match descriptor dimension");
    return single_norm(x.coefficients, x.space, opts);
}

double mn_norm(const MatrixElement& x, const NormOptions& opts) { return mn_norm_detail(x, opts).value; }

double cb_norm_exact(const ComplexMatrix& u, HilbertSide from, HilbertSide to) {
    require_finite(u, "cb_norm_exact");
    if (from == to) return operator_norm(u);
    return schatten_norm(u, 2.0);
}

}  // namespace opspace
