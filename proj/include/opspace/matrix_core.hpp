#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace opspace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent random stream for work item `index` of a computation seeded with `seed`.
// Streams are indexed rather than shared so results do not depend on scheduling.
Rng substream(std::uint64_t seed, std::uint64_t index);

struct HermitianSpectrum {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // unitary, columns match eigenvalues
};

bool all_finite(const ComplexMatrix& a);
void require_finite(const ComplexMatrix& a, const char* what);

ComplexMatrix hermitian_part(const ComplexMatrix& a);

// Eigendecomposition of (A + A*)/2.
HermitianSpectrum hermitian_spectrum(const ComplexMatrix& a);

RealVector singular_values(const ComplexMatrix& a);
double operator_norm(const ComplexMatrix& a);
double hilbert_schmidt_norm(const ComplexMatrix& a);

// (sum_i sigma_i^p)^(1/p); p = kInf gives the operator norm. Throws for p < 1.
double schatten_norm(const ComplexMatrix& a, double p);

// U diag(lambda^alpha) U* for positive semidefinite A.
// 
// A must be Hermitian up to 1e-10 ||A|| and have no eigenvalue below -1e-10 ||A||.
// Eigenvalues under the floor 1e-12 ||A|| are treated as exact zeros, so they map
// to 0 when alpha > 0 and to 1 when alpha == 0.
ComplexMatrix fractional_power(const ComplexMatrix& a, double alpha);

// Kronecker product; block (i,j) of the result is A(i,j) * B.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct LpNormOptions {
    int random_starts = 8;
    int max_iterations = 5000;
    double relative_tolerance = 1e-9;
    std::uint64_t seed = 0x5eed;
};

// Norm of an entrywise nonnegative matrix as a map l_p^n -> l_p^n, 1 < p < inf.
// 
// Nonlinear power iteration on the nonnegative orthant (the maximizer can be taken
// nonnegative), started from the uniform vector and `random_starts` random ones;
// the best value is returned.
double lp_operator_norm(const RealMatrix& m, double p, const LpNormOptions& opts = {});

// Same as above for a complex matrix whose entries must be real and nonnegative.
double lp_operator_norm(const ComplexMatrix& m, double p, const LpNormOptions& opts = {});

double lp_norm(const RealVector& v, double p);

// Random generators used by tests, probes and multistarts.
ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
ComplexMatrix random_psd(Eigen::Index n, Rng& rng);
ComplexMatrix random_density(Eigen::Index n, Rng& rng);
ComplexMatrix random_unitary(Eigen::Index n, Rng& rng);
ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

// exp(i H) for Hermitian H.
ComplexMatrix unitary_exp(const ComplexMatrix& hermitian);

// Operator-norm distance between the orthogonal projections onto the column spans.
double subspace_distance(const ComplexMatrix& basis_a, const ComplexMatrix& basis_b,
                         double rank_tol = 1e-10);

// Orthonormal basis of the column span (numerical rank cut at rank_tol * sigma_max).
ComplexMatrix orthonormal_basis(const ComplexMatrix& a, double rank_tol = 1e-10);

}  // namespace opspace
