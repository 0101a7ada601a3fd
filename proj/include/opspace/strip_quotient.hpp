#pragma once

#include "opspace/check.hpp"
#include "opspace/matrix_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace opspace {

// Harmonic measure of z = 1/2 on the strip 0 < Re z < 1, split as (mu0 + mu1)/2 with mu0 on
// Re z = 0 and mu1 on Re z = 1.  Nodes are the imaginary parts t of the boundary points.
struct StripQuadrature {
    RealVector nodes;
    RealVector w0;
    RealVector w1;
    double t_max = 6.0;
    double reproducing_error = 0.0;  // max over the harmonic test set
    double density_gap = 0.0;        // max disagreement of the two conformal oracles at the nodes
};

// Densities of mu0 (line = 0) or mu1 (line = 1) at t, pulled back from normalized arc length:
// via zeta = e^(i pi z) and the Cayley map, or via w = tanh(-i pi (z - 1/2) / 2).
double strip_density_cayley(double t, int line);
double strip_density_tanh(double t, int line);

// Trapezoid weights for the densities on [-t_max, t_max], tail mass lumped onto the end nodes.
// No validation; harmonic_measure checks the result.
StripQuadrature strip_nodes(int node_count, double t_max);

// Throws std::runtime_error if a measure misses mass 1 by 1e-8 or the reproducing error
// exceeds 1e-6.
StripQuadrature harmonic_measure(int node_count = 241, double t_max = 6.0);

struct HarmonicTest {
    std::string name;
    std::function<double(Complex)> u;
};

// Twelve bounded harmonic functions on the closed strip.
std::vector<HarmonicTest> harmonic_test_set();
double reproducing_error(const StripQuadrature& q);

// phi_k(z) = e^(pi beta_k z) with beta on the grid 4(k - D/2)/D; doubling D refines the grid,
// so the spans are nested and contain the constants.
struct HardyBasis {
    std::vector<double> beta;

    static HardyBasis exponential(int D);
    int size() const { return static_cast<int>(beta.size()); }
    Complex value(int k, Complex z) const;
    ComplexMatrix trace(const StripQuadrature& q, int line) const;  // nodes x D
    ComplexVector center() const;                                   // phi_k(1/2)
};

// max_k |phi_k(1/2) - integral of phi_k against mu| / max|phi_k| over the quadrature.
double hardy_trace_consistency(const HardyBasis& basis, const StripQuadrature& q);

// An element of the finite Hardy space with values in M_n(l_2^K): f_k = sum_b c[k*D + b] phi_b.
struct HardyElement {
    int n = 1;
    int K = 1;
    std::vector<double> beta;
    std::vector<ComplexMatrix> coeff;
};

struct QuotientOptions {
    int iterations_per_stage = 300;
    std::vector<double> betas{20.0, 100.0, 500.0, 2500.0, 1.0e4, 5.0e4};
    double rank_tol = 1e-10;
    double cap = 20000.0;  // limit on n*n*K*D
};

struct QuotientResult {
    double value = 0.0;  // max of the two boundary norms at the best f found
    double row_norm = 0.0;
    double col_norm = 0.0;
    int effective_dim = 0;
    HardyElement f;     // coefficients in the raw exponential basis
    bool feasible = true;
    std::string diagnostic;
};

// Upper bound for the norm of x = (x_1..x_K) in M_n(G/N): the infimum over f with f(1/2) = x
// of max(||f|d0|| in M_n(L2(mu0; l2)_r), ||f|d1|| in M_n(L2(mu1; l2)_c)).  A warm start on a
// nested smaller basis never increases the returned value beyond its own.
QuotientResult quotient_oh_norm(const std::vector<ComplexMatrix>& x, const StripQuadrature& q, const HardyBasis& basis,
                                const QuotientOptions& opts = {}, const HardyElement* warm = nullptr);

struct GraphOperator {
    ComplexMatrix U;
    RealVector lambda;  // descending
    int dropped = 0;    // directions cut for conditioning beyond 1e12
    std::string warning;
    ComplexMatrix domain_coords;  // D x r, maps orthonormal domain coordinates to coefficients
    ComplexMatrix T;              // r x r in orthonormal coordinates
};

// Matrix of f|d0 -> f|d1 on span(basis) in orthonormal coordinates of L2(mu0) and L2(mu1),
// with polar decomposition T = U Lambda (Lambda given by its singular values).
GraphOperator graph_operator_T(const StripQuadrature& q, const HardyBasis& basis);

// Norm ratio ||T c|| / ||c|| for the constant function (should be 1).
double constant_transfer_ratio(const StripQuadrature& q, const HardyBasis& basis);

// dim N = dim ker(f -> f(1/2)) on l2^K-valued elements of span(basis).
int quotient_kernel_dimension(const StripQuadrature& q, const HardyBasis& basis, int K, int& effective_dim);

struct PoissonReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

// |F(1/2)| <= (int |F| dmu0 + int |F| dmu1) / 2.
PoissonReport poisson_mean_bound(const StripQuadrature& q, const ComplexVector& on_d0, const ComplexVector& on_d1,
                                 Complex center);

struct QuantizationReport {
    double identity_error = 0.0;
    double isometry_error = 0.0;
    double linearity_error = 0.0;
    std::vector<CheckRow> rows;
};

// H = L2(mu) sampled at `nodes_per_line` nodes per line; j(f) = f 1_d1 + conj(f) 1_d0,
// t(f) = l(conj(f) 1_d0)^* + l(f 1_d1), s(h) = l(h) + l(h)^*, on the Fock space cut at d.
QuantizationReport quantization_bridge(int nodes_per_line, int d, int samples, std::uint64_t seed);

}  // namespace opspace
