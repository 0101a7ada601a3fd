#pragma once

#include "opspace/check.hpp"
#include "opspace/matrix_core.hpp"
#include "opspace/theta.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace opspace {

using SparseOp = Eigen::SparseMatrix<Complex>;

enum class Side { Left, Right };

// Full Fock space over C^(2n) cut at word length d.  Letters 0..n-1 are e_i, letters
// n..2n-1 are e'_i.  Words are ordered by degree, then lexicographically (first letter
// most significant); the empty word Omega has index 0.
class TruncatedFock {
public:
    TruncatedFock(int n, int d);

    int generators() const { return n_; }
    int letters() const { return 2 * n_; }
    int cutoff() const { return d_; }
    Eigen::Index dim() const { return offsets_.back(); }
    Eigen::Index degree_offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }

    Eigen::Index word_index(const std::vector<int>& word) const;
    std::vector<int> word(Eigen::Index index) const;
    int degree(Eigen::Index index) const;

    // Creation by a single basis letter; words of degree d are sent to 0.
    const SparseOp& left(int letter) const { return left_[static_cast<std::size_t>(letter)]; }
    const SparseOp& right(int letter) const { return right_[static_cast<std::size_t>(letter)]; }

    SparseOp creation_sparse(const ComplexVector& h, Side side) const;
    ComplexMatrix creation(const ComplexVector& h, Side side) const;

    // Orthogonal projection onto words of degree < k.
    SparseOp degree_projection(int k) const;
    ComplexVector vacuum() const;

    static Eigen::Index closed_form_dim(int n, int d);

private:
    int n_;
    int d_;
    std::vector<Eigen::Index> offsets_;  // offsets_[k] = first index of degree k; back() = dim
    std::vector<SparseOp> left_;
    std::vector<SparseOp> right_;
};

// x_i = (1-theta) lambda_i^(theta/2) l_i + theta lambda_i^(-(1-theta)/2) l'_i^*
// y_i = (1-theta) lambda_i^((1-theta)/2) r'_i + theta lambda_i^(-theta/2) r_i^*
struct CircularFamily {
    const TruncatedFock* fock = nullptr;
    ThetaParams params;
    std::vector<double> lambdas;
    std::vector<double> xi;  // theta/(1-theta) * lambda^(-1/2)
    std::vector<SparseOp> x;
    std::vector<SparseOp> y;

    static CircularFamily build(const TruncatedFock& fock, double theta, std::vector<double> lambdas);
    ComplexMatrix x_dense(int i) const { return ComplexMatrix(x[static_cast<std::size_t>(i)]); }
    ComplexMatrix y_dense(int i) const { return ComplexMatrix(y[static_cast<std::size_t>(i)]); }
};

Complex vacuum_state(const TruncatedFock& fock, const ComplexMatrix& t);

// Words in the generators x_j and x_j^*.
struct FockLetter {
    int generator = 0;
    bool adjoint = false;
};

struct Monomial {
    Complex scalar{1.0, 0.0};
    std::vector<FockLetter> letters;  // product left to right
};

// sigma_z on a monomial: each x_j contributes xi_j^(2iz), each x_j^* contributes xi_j^(-2iz).
Monomial modular_apply(const CircularFamily& family, Complex z, const Monomial& word);
ComplexMatrix monomial_matrix(const CircularFamily& family, const Monomial& word);

// Diagonal of U_t, the first quantization of e_j -> xi_j^(2it) e_j, e'_j -> xi_j^(-2it) e'_j.
ComplexVector modular_unitary_diagonal(const CircularFamily& family, double t);

// ||sigma_{-i theta/2}(sum z_j x_j) Omega||.
double l_theta_norm(const CircularFamily& family, const ComplexVector& z);

// Norm of sum w_j y_j in the right-hand interpolation space of parameter 1-theta, by the
// mirrored scaling xi_j^(1-theta).
double r_one_minus_theta_norm(const CircularFamily& family, const ComplexVector& w);

// P(T) = l(Q(T Omega)) + l(Q'(T^* Omega))^*.
ComplexMatrix projection_P(const TruncatedFock& fock, const ComplexMatrix& t);

struct TensorTerm {
    SparseOp op;
    ComplexMatrix coeff;
};

struct MinTensorOptions {
    Eigen::Index cap = 20000;
    Eigen::Index dense_limit = 700;
    int max_krylov = 160;
    std::uint64_t seed = 0x1a2c05;
};

// ||sum T_i (x) a_i|| on the truncated space tensor C^m.
double min_tensor_norm(const TruncatedFock& fock, const std::vector<TensorTerm>& terms,
                       const MinTensorOptions& opts = {});

// f_i(z) = ((1-theta)^(1-z) theta^z)^(-1) ((1-theta) lambda_i^(z/2) r'_i + theta lambda_i^(-(1-z)/2) r_i^*).
SparseOp f_function(const CircularFamily& family, int i, Complex z);

// Norm of sum alpha_i f_i(z): ||. Omega|| when Re z = 0, ||(.)^* Omega|| when Re z = 1.
double f_boundary_norm(const CircularFamily& family, const ComplexVector& alpha, Complex z);

// Checks of the chain used to prove the factorization (equality of the modular norm,
// vacuum pairing, bilinear bound, y-side bound and the triangle upper bound).
// z is n x K; a, when non-empty, holds n coefficients in M_m.
std::vector<CheckRow> check_factorization_chain(const CircularFamily& family, const ComplexMatrix& z,
                                           const std::vector<ComplexMatrix>& a = {});

struct SandwichReport {
    double fock_norm = 0.0;  // ||sum a_i (x) (l_i + xi_i l'_i^*)|| on the truncated space
    double formula = 0.0;    // max{||sum a^*a||^(1/2), ||sum xi^2 aa^*||^(1/2)}
    std::vector<CheckRow> rows;
};

// Two-sided comparison of the Fock realization of delta^xi with its closed-form norm:
// fock_norm / 2 <= formula <= fock_norm + slack * formula.  Truncation compresses, so
// fock_norm is a lower bound of the full Fock value and the upper gap shrinks with d.
SandwichReport delta_sandwich(const TruncatedFock& fock, const std::vector<double>& xi,
                              const std::vector<ComplexMatrix>& a, double truncation_slack = 1e-2);

struct AmpliationReport {
    double lhs = 0.0;  // ||sum P(T_j) (x) b_j||
    double rhs = 0.0;  // ||sum T_j (x) b_j||
};

AmpliationReport projection_ampliation(const TruncatedFock& fock, const std::vector<ComplexMatrix>& t,
                                       const std::vector<ComplexMatrix>& b);

}  // namespace opspace
