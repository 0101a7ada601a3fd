#include "opspace/subspace_geometry.hpp"

#include "opspace/opspace_norms.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opspace {

SubspaceRC SubspaceRC::from_pairs(const std::vector<std::pair<ComplexVector, ComplexVector>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("SubspaceRC: need at least one basis pair");
    SubspaceRC s;
    s.m = static_cast<int>(pairs.front().first.size());
    s.basis.resize(2 * s.m, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (pairs[j].first.size() != s.m || pairs[j].second.size() != s.m)
            throw std::invalid_argument("SubspaceRC: pair has wrong size");
        s.basis.col(static_cast<Eigen::Index>(j)) << pairs[j].first, pairs[j].second;
    }
    s.validate();
    return s;
}

void SubspaceRC::validate() const {
    if (m < 1 || basis.rows() != 2 * m || basis.cols() < 1) throw std::invalid_argument("SubspaceRC: bad shape");
    require_finite(basis, "SubspaceRC");
    if (orthonormal_basis(basis).cols() != basis.cols())
        throw std::invalid_argument("SubspaceRC: basis is linearly dependent");
}

ComplexMatrix XuDecomposition::reassembled() const {
    const Eigen::Index h = row_part.cols(), g = lambda.size(), c = col_part.cols();
    ComplexMatrix out = ComplexMatrix::Zero(2 * m, h + g + c);
    out.block(0, 0, m, h) = row_part;
    for (Eigen::Index j = 0; j < g; ++j) {
        out.block(0, h + j, m, 1) = graph_domain.col(j);
        out.block(m, h + j, m, 1) = lambda[j] * graph_range.col(j);
    }
    out.block(m, h + g, m, c) = col_part;
    return out;
}

XuDecomposition xu_decompose(const SubspaceRC& s, double rank_tol) {
    s.validate();
    const int m = s.m;
    XuDecomposition out;
    out.m = m;
    const ComplexMatrix q = orthonormal_basis(s.basis, rank_tol);
    const Eigen::Index k = q.cols();
    const ComplexMatrix top = q.topRows(m), bot = q.bottomRows(m);
    Eigen::JacobiSVD<ComplexMatrix> svd(top, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv[r] > rank_tol) ++r;
    // directions with vanishing row coordinate lie in S intersected with {0} (+) C^m
    const ComplexMatrix v_null = svd.matrixV().rightCols(k - r);
    out.col_part = orthonormal_basis(bot * v_null, rank_tol);
    out.degenerate_directions = static_cast<int>((k - r) - out.col_part.cols());
    if (r == 0) {
        out.row_part = ComplexMatrix(m, 0);
        out.graph_domain = ComplexMatrix(m, 0);
        out.graph_range = ComplexMatrix(m, 0);
        out.lambda = RealVector(0);
        return out;
    }
    // complement: x = U_r z, y = M z
    const ComplexMatrix ur = svd.matrixU().leftCols(r);
    const ComplexMatrix mmap = bot * svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<ComplexMatrix> gsvd(mmap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& gs = gsvd.singularValues();
    const double scale = std::max(1.0, gs.size() ? gs[0] : 0.0);
    std::vector<Eigen::Index> graph_idx, row_idx;
    for (Eigen::Index j = 0; j < r; ++j) (j < gs.size() && gs[j] > rank_tol * scale ? graph_idx : row_idx).push_back(j);
    out.row_part.resize(m, static_cast<Eigen::Index>(row_idx.size()));
    for (std::size_t j = 0; j < row_idx.size(); ++j)
        out.row_part.col(static_cast<Eigen::Index>(j)) = ur * gsvd.matrixV().col(row_idx[j]);
    out.graph_domain.resize(m, static_cast<Eigen::Index>(graph_idx.size()));
    out.graph_range.resize(m, static_cast<Eigen::Index>(graph_idx.size()));
    out.lambda.resize(static_cast<Eigen::Index>(graph_idx.size()));
    for (std::size_t j = 0; j < graph_idx.size(); ++j) {
        const Eigen::Index c = static_cast<Eigen::Index>(j);
        out.graph_domain.col(c) = ur * gsvd.matrixV().col(graph_idx[j]);
        out.graph_range.col(c) = gsvd.matrixU().col(graph_idx[j]);
        out.lambda[c] = gs[graph_idx[j]];
    }
    return out;
}

std::vector<int> SpectralSplit::projector(double eps) const {
    std::vector<int> idx;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] < eps) idx.push_back(static_cast<int>(i));
    return idx;
}

std::vector<double> SpectralSplit::inverted_lambda2() const {
    std::vector<double> out;
    for (double l : lambda2) out.push_back(1.0 / l);
    return out;
}

SpectralSplit split_lambda(const std::vector<double>& lambda) {
    SpectralSplit s;
    s.all = lambda;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double l = lambda[i];
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("split_lambda: entries must be positive");
        if (l <= 1.0) {
            s.lambda1.push_back(l);
            s.index1.push_back(static_cast<int>(i));
        } else {
            s.lambda2.push_back(l);
            s.index2.push_back(static_cast<int>(i));
        }
    }
    return s;
}

TailRule TailRule::power_law(double exponent) {
    if (exponent == 0.0) return {TailKind::BoundedRatio, TailSide::Auto};
    if (exponent > 0.0) return {2.0 * exponent > 1.0 ? TailKind::SquareSummable : TailKind::Divergent, TailSide::Small};
    return {-2.0 * exponent > 1.0 ? TailKind::SquareSummable : TailKind::Divergent, TailSide::Large};
}

TailRule TailRule::geometric(double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("geometric tail: ratio must be positive");
    if (ratio == 1.0) return {TailKind::BoundedRatio, TailSide::Auto};
    return {TailKind::SquareSummable, ratio < 1.0 ? TailSide::Small : TailSide::Large};
}

namespace {

const char* kR = "R";
const char* kRC = "R∩C";
const char* kC = "C";

int factor_rank(const std::string& f) { return f == kR ? 0 : (f == kRC ? 1 : 2); }

std::string assemble(std::vector<std::string> factors) {
    std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) { return factor_rank(a) < factor_rank(b); });
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
    if (factors.empty()) return "0";
    if (factors.size() == 1) return factors.front();
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "⊕";
        out += factors[i] == kRC ? "(R∩C)" : factors[i];
    }
    return out;
}

std::vector<std::string> parse_factors(const std::string& label) {
    std::vector<std::string> out;
    const std::string sep = "⊕";
    std::size_t pos = 0;
    while (pos <= label.size()) {
        const std::size_t next = label.find(sep, pos);
        std::string part = label.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!part.empty() && part.front() == '(') part = part.substr(1, part.size() - 2);
        out.push_back(part);
        if (next == std::string::npos) break;
        pos = next + sep.size();
    }
    return out;
}

}  // namespace

std::string swap_row_column_label(const std::string& label) {
    if (label == "graph-type" || label == "0") return label;
    std::vector<std::string> f = parse_factors(label);
    for (auto& x : f) {
        if (x == kR) x = kC;
        else if (x == kC) x = kR;
    }
    return assemble(f);
}

ClassifyResult classify(const ClassifyInput& input) {
    ClassifyResult res;
    bool graph_type = false;
    double mn = kInf, mx = 0.0;
    for (const auto& comp : input.components) {
        if (!comp.tail) throw std::invalid_argument("classify: a tail rule is required; finite data cannot decide");
        if (comp.xi.empty()) throw std::invalid_argument("classify: component has no xi values");
        for (double x : comp.xi) {
            if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("classify: xi must be positive");
            mn = std::min(mn, x);
            mx = std::max(mx, x);
            if (x < input.epsilon) res.small_sum += x * x;
            if (1.0 / x < input.epsilon) res.large_sum += 1.0 / (x * x);
        }
        switch (comp.tail->kind) {
        case TailKind::BoundedRatio: res.factors.push_back(kRC); break;
        case TailKind::Divergent: graph_type = true; break;
        case TailKind::SquareSummable: {
            TailSide side = comp.tail->side;
            if (side == TailSide::Auto) {
                std::vector<double> v = comp.xi;
                std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
                side = v[v.size() / 2] < 1.0 ? TailSide::Small : TailSide::Large;
            }
            res.factors.push_back(side == TailSide::Small ? kR : kC);
            break;
        }
        }
    }
    if (input.include_row) res.factors.push_back(kR);
    if (input.include_col) res.factors.push_back(kC);
    res.min_xi = input.components.empty() ? 0.0 : mn;
    res.max_xi = mx;
    res.label = graph_type ? "graph-type" : assemble(res.factors);
    return res;
}

ClassifyResult classify(const std::vector<double>& xi, const std::optional<TailRule>& tail, double epsilon) {
    ClassifyInput in;
    in.components.push_back({xi, tail});
    in.epsilon = epsilon;
    return classify(in);
}

ComplexMatrix graph_projection(const ComplexMatrix& beta, const std::vector<double>& lambda) {
    const Eigen::Index m = static_cast<Eigen::Index>(lambda.size());
    if (beta.rows() != m || beta.cols() != m) throw std::invalid_argument("graph_projection: size mismatch");
    RealVector l = Eigen::Map<const RealVector>(lambda.data(), m);
    const ComplexMatrix lam = l.cast<Complex>().asDiagonal();
    const ComplexMatrix alpha = ComplexMatrix::Identity(m, m) - beta * lam;
    ComplexMatrix p(2 * m, 2 * m);
    p << alpha, beta, lam * alpha, lam * beta;
    return p;
}

ProjectionReport projection_decompose(const ComplexMatrix& p, const std::vector<double>& lambda) {
    ProjectionReport rep;
    const Eigen::Index m = static_cast<Eigen::Index>(lambda.size());
    if (m < 1 || p.rows() != 2 * m || p.cols() != 2 * m) {
        rep.valid = false;
        rep.diagnostic = "projection has wrong shape";
        return rep;
    }
    for (double l : lambda)
        if (!(l > 0.0) || l > 1.0 + 1e-12) {
            rep.valid = false;
            rep.diagnostic = "Lambda must be positive with norm at most 1";
            return rep;
        }
    const RealVector l = Eigen::Map<const RealVector>(lambda.data(), m);
    const ComplexMatrix lam = l.cast<Complex>().asDiagonal();
    const double pn = std::max(1.0, operator_norm(p));
    if ((p * p - p).norm() > 1e-9 * pn) {
        rep.valid = false;
        rep.diagnostic = "not idempotent";
        return rep;
    }
    ComplexMatrix graph(2 * m, m);
    graph << ComplexMatrix::Identity(m, m), lam;
    if (subspace_distance(p, graph) > 1e-9) {
        rep.valid = false;
        rep.diagnostic = "range differs from G(Lambda)";
        return rep;
    }
    rep.alpha = p.block(0, 0, m, m);
    rep.beta = p.block(0, m, m, m);
    rep.norm_alpha = cb_norm_exact(rep.alpha, HilbertSide::Row, HilbertSide::Row);
    rep.norm_lambda_alpha = cb_norm_exact(lam * rep.alpha, HilbertSide::Row, HilbertSide::Column);
    rep.norm_beta = cb_norm_exact(rep.beta, HilbertSide::Column, HilbertSide::Row);
    rep.norm_lambda_beta = cb_norm_exact(lam * rep.beta, HilbertSide::Column, HilbertSide::Column);
    rep.cb_bound = std::max({rep.norm_alpha, rep.norm_lambda_alpha, rep.norm_beta, rep.norm_lambda_beta});
    rep.lambda_hs = l.norm();
    rep.identity_error = (lam * rep.alpha + lam * rep.beta * lam - lam).cwiseAbs().maxCoeff();
    const double via = schatten_norm(lam * rep.alpha, 2.0) + schatten_norm(lam * rep.beta * lam, 2.0);
    rep.dcb_bound = std::max(1.0, rep.lambda_hs);
    rep.rows.push_back(check_eq("geometry", "graph_identity", rep.identity_error, 0.0, 1e-8,
                                "projection identity on the graph"));
    rep.rows.push_back(check_le("geometry", "hs_triangle", rep.lambda_hs, via, 1e-8, "Hilbert-Schmidt triangle step"));
    rep.rows.push_back(check_le("geometry", "hs_chain", rep.lambda_hs, 2.0 * rep.cb_bound, 1e-8,
                                "Hilbert-Schmidt norm bounded by twice the projection bound"));
    rep.rows.push_back(check_le("geometry", "dcb_bound", rep.dcb_bound, 2.0 * rep.cb_bound, 1e-8,
                                "distance to R bounded by twice the projection bound"));
    return rep;
}

namespace {

std::vector<double> selected_squares(const std::vector<double>& lambda, double eps) {
    std::vector<double> sel;
    for (double l : lambda) {
        if (!(l > 0.0)) throw std::invalid_argument("pi2n: lambda must be positive");
        if (l < eps) sel.push_back(l * l);
    }
    return sel;
}

}  // namespace

double pi2n(const std::vector<double>& lambda, double eps, int n) {
    if (n < 1) throw std::invalid_argument("pi2n: n must be >= 1");
    std::vector<double> sel = selected_squares(lambda, eps);
    std::sort(sel.begin(), sel.end(), std::greater<>());
    const std::size_t take = std::min(sel.size(), static_cast<std::size_t>(n));
    return std::sqrt(std::accumulate(sel.begin(), sel.begin() + static_cast<long>(take), 0.0));
}

double pi2n_subsets(const std::vector<double>& lambda, double eps, int n) {
    if (n < 1) throw std::invalid_argument("pi2n_subsets: n must be >= 1");
    const std::vector<double> sel = selected_squares(lambda, eps);
    const int k = static_cast<int>(sel.size());
    const int take = std::min(k, n);
    if (take == 0) return 0.0;
    std::vector<bool> mask(static_cast<std::size_t>(k), false);
    std::fill(mask.begin(), mask.begin() + take, true);
    double best = 0.0;
    do {
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
            if (mask[static_cast<std::size_t>(i)]) acc += sel[static_cast<std::size_t>(i)];
        best = std::max(best, acc);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return std::sqrt(best);
}

Pi2nProbeReport pi2n_probes(const std::vector<double>& lambda, double eps, int n, int probes, std::uint64_t seed) {
    Pi2nProbeReport rep;
    rep.min_slack = kInf;
    const Eigen::Index m = static_cast<Eigen::Index>(lambda.size());
    const double p2 = pi2n(lambda, eps, n);
    std::vector<Eigen::Index> range;
    for (Eigen::Index i = 0; i < m; ++i)
        if (lambda[static_cast<std::size_t>(i)] < eps) range.push_back(i);
    for (int t = 0; t < probes; ++t) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(t));
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(t % 4);
        ComplexMatrix v = ComplexMatrix::Zero(m, k);
        const ComplexMatrix g = random_gaussian(static_cast<Eigen::Index>(range.size()), k, rng);
        for (std::size_t r = 0; r < range.size(); ++r) v.row(range[r]) = g.row(static_cast<Eigen::Index>(r));
        ComplexVector xi = random_gaussian(k, 1, rng).col(0);
        xi /= xi.norm();
        std::vector<ComplexMatrix> a;
        for (int i = 0; i < n; ++i) a.push_back(random_gaussian(k, k, rng));
        double lhs = 0.0;
        ComplexMatrix col = ComplexMatrix::Zero(k, k);
        for (const auto& ai : a) {
            ComplexVector wa = v * (ai * xi);
            for (Eigen::Index i = 0; i < m; ++i) wa[i] *= lambda[static_cast<std::size_t>(i)];
            lhs += wa.squaredNorm();
            col += ai.adjoint() * ai;
        }
        lhs = std::sqrt(lhs);
        const double rhs = p2 * operator_norm(v) * std::sqrt(operator_norm(col));
        rep.min_slack = std::min(rep.min_slack, rhs - lhs);
        ++rep.probes;
    }
    if (rep.probes == 0) rep.min_slack = 0.0;
    rep.rows.push_back(check_le("geometry", "pi2n_probe_min_slack", -rep.min_slack, 0.0, 1e-9,
                                "pi_2^n bound on probes into the spectral range"));
    return rep;
}

}  // namespace opspace
