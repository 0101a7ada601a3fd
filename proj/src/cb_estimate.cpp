#include "opspace/cb_estimate.hpp"

#include <algorithm>
#include <cmath>

namespace opspace {

CbSource CbSource::descriptor(OpSpaceDescriptor d) {
    CbSource s;
    s.space = std::move(d);
    return s;
}

CbSource CbSource::algebra(int n) {
    if (n < 1) throw std::invalid_argument("matrix algebra dimension must be >= 1");
    CbSource s;
    s.matrix_algebra = true;
    s.algebra_dim = n;
    return s;
}

int CbSource::dimension() const { return matrix_algebra ? algebra_dim * algebra_dim : space.dimension(); }

std::vector<ComplexMatrix> apply_map(const ComplexMatrix& u, const std::vector<ComplexMatrix>& a) {
    if (static_cast<std::size_t>(u.cols()) != a.size()) throw std::invalid_argument("apply_map: size mismatch");
    const Eigen::Index k = a.front().rows();
    std::vector<ComplexMatrix> out(static_cast<std::size_t>(u.rows()), ComplexMatrix::Zero(k, k));
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j)
            if (u(i, j) != Complex(0.0)) out[static_cast<std::size_t>(i)] += u(i, j) * a[static_cast<std::size_t>(j)];
    return out;
}

std::vector<ComplexMatrix> algebra_coefficients(const ComplexMatrix& x, int n) {
    const Eigen::Index k = x.rows() / n;
    std::vector<ComplexMatrix> out(static_cast<std::size_t>(n * n), ComplexMatrix(k, k));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            ComplexMatrix& c = out[static_cast<std::size_t>(p * n + q)];
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index s = 0; s < k; ++s) c(r, s) = x(r * n + p, s * n + q);
        }
    return out;
}

namespace {

bool solver_based(const OpSpaceDescriptor& d) {
    if (d.kind == SpaceKind::RTheta) return d.theta >= 1e-3 && d.theta <= 1.0 - 1e-3 && d.theta != 0.5;
    if (d.kind == SpaceKind::DirectSum)
        return std::any_of(d.summands.begin(), d.summands.end(), [](const auto& s) { return solver_based(s); });
    return false;
}

// Target norm with a warm start carried between calls for the sup-form solver.
class TargetEvaluator {
public:
    TargetEvaluator(const OpSpaceDescriptor& target, const NormOptions& inner) : target_(target), inner_(inner) {}

    double operator()(const std::vector<ComplexMatrix>& b, ComplexMatrix* warm) const {
        if (target_.kind == SpaceKind::RTheta && solver_based(target_)) {
            const ComplexMatrix* w = (warm && warm->rows() == b.front().rows()) ? warm : nullptr;
            const RThetaSolution s = rtheta_sup_norm(b, target_.theta, inner_, w);
            if (warm) *warm = s.t_sq;
            return s.value;
        }
        return mn_norm(MatrixElement{b, target_}, inner_);
    }

private:
    const OpSpaceDescriptor& target_;
    NormOptions inner_;
};

ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
    ComplexMatrix h = hermitian_part(random_gaussian(n, n, rng));
    const double nrm = h.norm();
    return nrm > 0.0 ? ComplexMatrix(h / nrm) : h;
}

// Finite-difference gradient ascent on the ratio with backtracking; a is renormalized by the
// caller-supplied ratio, so only directions matter.  Returns the best ratio and leaves its argument in a.
template <class Ratio>
double polish(std::vector<ComplexMatrix>& a, const Ratio& ratio, int steps) {
    double val = ratio(a);
    double step = 1e-2;
    const double h = 1e-7;
    for (int it = 0; it < steps; ++it) {
        std::vector<ComplexMatrix> grad;
        double gnorm = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            ComplexMatrix g = ComplexMatrix::Zero(a[j].rows(), a[j].cols());
            for (Eigen::Index r = 0; r < a[j].rows(); ++r)
                for (Eigen::Index c = 0; c < a[j].cols(); ++c)
                    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
                        std::vector<ComplexMatrix> p = a, m = a;
                        p[j](r, c) += h * dir;
                        m[j](r, c) -= h * dir;
                        g(r, c) += dir * (ratio(p) - ratio(m)) / (2.0 * h);
                    }
            gnorm += g.squaredNorm();
            grad.push_back(std::move(g));
        }
        gnorm = std::sqrt(gnorm);
        if (!(gnorm > 1e-12)) break;
        bool moved = false;
        for (int bt = 0; bt < 30 && !moved; ++bt, step *= 0.5) {
            std::vector<ComplexMatrix> cand = a;
            for (std::size_t j = 0; j < a.size(); ++j) cand[j] += (step / gnorm) * grad[j];
            const double v = ratio(cand);
            if (v > val) {
                val = v;
                a = std::move(cand);
                moved = true;
                step *= 4.0;
            }
        }
        if (!moved) break;
    }
    return val;
}

}  // namespace

CbEstimateResult cb_norm_level_estimate(const LinearMapSpec& u, const CbEstimateOptions& opts) {
    if (opts.level < 1) throw std::invalid_argument("cb_norm_level_estimate: level must be >= 1");
    u.target.validate();
    if (!u.source.matrix_algebra) u.source.space.validate();
    const int src_dim = u.source.dimension();
    if (u.matrix.rows() != u.target.dimension() || u.matrix.cols() != src_dim)
        throw std::invalid_argument("cb_norm_level_estimate: map matrix has wrong shape");
    require_finite(u.matrix, "cb_norm_level_estimate");

    CbEstimateResult result;
    result.certified = u.source.matrix_algebra || !solver_based(u.source.space);
    TargetEvaluator target(u.target, opts.inner);
    if (u.matrix.norm() == 0.0) {
        result.per_level.assign(static_cast<std::size_t>(opts.level), 0.0);
        return result;
    }

    double running = 0.0;
    if (u.source.matrix_algebra) {
        const int n = u.source.algebra_dim;
        ComplexMatrix best_x;
        for (int k = 1; k <= opts.level; ++k) {
            const Eigen::Index dim = static_cast<Eigen::Index>(k) * n;
            std::vector<ComplexMatrix> starts;
            if (best_x.size() > 0) {
                ComplexMatrix padded = ComplexMatrix::Identity(dim, dim);
                padded.topLeftCorner(best_x.rows(), best_x.cols()) = best_x;
                starts.push_back(padded);
            }
            starts.push_back(ComplexMatrix::Identity(dim, dim));
            for (int r = 0; r < opts.restarts; ++r) {
                Rng rng = substream(opts.seed, static_cast<std::uint64_t>(k * 1000 + r));
                starts.push_back(random_unitary(dim, rng));
            }
            double level_best = -1.0;
            for (std::size_t si = 0; si < starts.size(); ++si) {
                Rng rng = substream(opts.seed ^ 0x5151ULL, static_cast<std::uint64_t>(k * 1000 + si));
                ComplexMatrix x = starts[si];
                ComplexMatrix warm;
                double val = target(apply_map(u.matrix, algebra_coefficients(x, n)), &warm);
                ++result.evaluations;
                double step = opts.initial_step;
                for (int it = 0; it < opts.iterations; ++it) {
                    const ComplexMatrix cand = unitary_exp(step * random_hermitian(dim, rng)) * x;
                    ComplexMatrix w = warm;
                    const double v = target(apply_map(u.matrix, algebra_coefficients(cand, n)), &w);
                    ++result.evaluations;
                    if (v > val) {
                        val = v;
                        x = cand;
                        warm = w;
                        step = std::min(step * 1.22, 2.0);
                    } else {
                        step = std::max(step * 0.95, 1e-7);
                    }
                }
                if (val > level_best) {
                    level_best = val;
                    best_x = x;
                }
            }
            running = std::max(running, level_best);
            result.per_level.push_back(running);
        }
    } else {
        const OpSpaceDescriptor& src = u.source.space;
        const NormOptions src_opts = opts.inner;
        auto source_norm = [&](const std::vector<ComplexMatrix>& a) { return mn_norm(MatrixElement{a, src}, src_opts); };
        std::vector<ComplexMatrix> best_a;
        for (int k = 1; k <= opts.level; ++k) {
            std::vector<std::vector<ComplexMatrix>> starts;
            if (!best_a.empty()) {
                std::vector<ComplexMatrix> padded;
                for (const auto& a : best_a) {
                    ComplexMatrix p = ComplexMatrix::Zero(k, k);
                    p.topLeftCorner(a.rows(), a.cols()) = a;
                    padded.push_back(p);
                }
                starts.push_back(padded);
            }
            if (k >= 2) {
                // column and row matrix-unit families, the usual extremal elements for Hilbertian spaces
                std::vector<ComplexMatrix> col, row;
                for (int j = 0; j < src_dim; ++j) {
                    col.push_back(matrix_unit(k, j % k, 0));
                    row.push_back(matrix_unit(k, 0, j % k));
                }
                starts.push_back(col);
                starts.push_back(row);
            }
            for (int r = 0; r <= opts.restarts; ++r) {
                Rng rng = substream(opts.seed, static_cast<std::uint64_t>(k * 1000 + r));
                std::vector<ComplexMatrix> a;
                for (int j = 0; j < src_dim; ++j) a.push_back(random_gaussian(k, k, rng));
                starts.push_back(a);
            }
            double level_best = -1.0;
            for (std::size_t si = 0; si < starts.size(); ++si) {
                Rng rng = substream(opts.seed ^ 0x7171ULL, static_cast<std::uint64_t>(k * 1000 + si));
                std::vector<ComplexMatrix> a = starts[si];
                double den = source_norm(a);
                if (den <= 0.0) continue;
                for (auto& c : a) c /= den;
                ComplexMatrix warm;
                double val = target(apply_map(u.matrix, a), &warm);
                ++result.evaluations;
                double step = opts.initial_step;
                for (int it = 0; it < opts.iterations; ++it) {
                    std::vector<ComplexMatrix> cand = a;
                    for (auto& c : cand) c += step * random_gaussian(k, k, rng) / std::sqrt(static_cast<double>(k));
                    const double d = source_norm(cand);
                    if (d <= 0.0) continue;
                    for (auto& c : cand) c /= d;
                    ComplexMatrix w = warm;
                    const double v = target(apply_map(u.matrix, cand), &w);
                    ++result.evaluations;
                    if (v > val) {
                        val = v;
                        a = cand;
                        warm = w;
                        step = std::min(step * 1.22, 2.0);
                    } else {
                        step = std::max(step * 0.95, 1e-7);
                    }
                }
                val = std::max(val, polish(a, [&](const std::vector<ComplexMatrix>& c) {
                    const double d = source_norm(c);
                    if (!(d > 0.0)) return -1.0;
                    std::vector<ComplexMatrix> cn = c;
                    for (auto& m : cn) m /= d;
                    ComplexMatrix w = warm;
                    ++result.evaluations;
                    return target(apply_map(u.matrix, cn), &w);
                }, opts.polish_steps));
                if (val > level_best) {
                    level_best = val;
                    best_a = a;
                }
            }
            running = std::max(running, level_best);
            result.per_level.push_back(running);
        }
    }
    result.value = running;
    return result;
}

}  // namespace opspace
