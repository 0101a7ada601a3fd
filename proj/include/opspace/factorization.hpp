#pragma once

#include "opspace/cb_estimate.hpp"
#include "opspace/check.hpp"
#include "opspace/matrix_core.hpp"
#include "opspace/theta.hpp"

#include <vector>

namespace opspace {

struct StateCertificate {
    ComplexMatrix f;
    ComplexMatrix g;
    double C = 0.0;
    ThetaParams theta;

    void validate() const;
};

// A linear map u from E = span(basis) inside M_N into an n-dimensional target R[theta]_n.
// u(sum_j c_j B_j) = u_matrix * c.  With an empty basis list E is all of M_N with the
// matrix units e_pq at index p*N + q.
struct CbMapSpec {
    int N = 1;
    std::vector<ComplexMatrix> basis;
    ComplexMatrix u_matrix;
    double theta = 0.5;
    double exactness = 1.0;  // caller-supplied constant multiplying c(theta) in subspace mode

    static CbMapSpec full(int N, ComplexMatrix u, double theta);
    // u(a)_i = tr(M_i a)
    static CbMapSpec from_functionals(const std::vector<ComplexMatrix>& m, double theta);

    int source_dim() const { return static_cast<int>(u_matrix.cols()); }
    int target_dim() const { return static_cast<int>(u_matrix.rows()); }
    ComplexMatrix basis_element(int j) const;
    // Coordinates of a in the basis; throws if a is not in E (relative residual > 1e-8).
    ComplexVector coordinates(const ComplexMatrix& a) const;
    ComplexVector apply(const ComplexMatrix& a) const;
    ComplexMatrix element(const ComplexVector& c) const;
    LinearMapSpec as_linear_map() const;
    void validate() const;
};

// Map with planted certificate: u(a)_i = tr(f^((1-theta)/2) K_i g^(theta/2) a), with
// constant C = largest singular value of the matrix whose rows are the entries of K_i.
struct PlantedMap {
    CbMapSpec spec;
    StateCertificate planted;
};
PlantedMap certificate_built_map(const ComplexMatrix& f, const ComplexMatrix& g, const std::vector<ComplexMatrix>& k,
                                 double theta);

struct AmGmResult {
    double value = 0.0;
    double lambda = 0.0;
    double analytic = 0.0;
    bool lambda_defined = true;
};

// inf over lambda > 0 of (1-theta) lambda^theta a0 + theta lambda^(theta-1) a1.
AmGmResult weighted_am_gm(double alpha0, double alpha1, double theta);

struct PointwiseReport {
    std::vector<double> slacks;
    double min_slack = 0.0;
    bool pass = true;
};

// Slack C f(a^*a)^((1-theta)/2) g(aa^*)^(theta/2) - ||u a|| for each sample.
PointwiseReport verify_pointwise(const CbMapSpec& spec, const StateCertificate& cert,
                                 const std::vector<ComplexMatrix>& samples, double tol = 1e-9);

struct Family {
    std::vector<ComplexMatrix> a;
    std::vector<double> lambda;
};

// sum ||u a_i||^2 <= K^2 {(1-theta)||sum lambda^theta a^*a|| + theta||sum lambda^(theta-1) aa^*||};
// constant K defaults to c(theta) * exactness when non-positive.
std::vector<CheckRow> verify_finite_criterion(const CbMapSpec& spec, const std::vector<Family>& families,
                                              double constant = 0.0);

// Same inequality from precomputed Hilbertian data (no realization in M_N is needed).
CheckRow verify_finite_criterion_abstract(double sum_u_sq, double column_norm, double row_norm, double theta,
                                          double constant);

struct ExactConstant {
    double C = 0.0;         // sup over a of ||ua|| / (f(a^*a)^((1-theta)/2) g(aa^*)^(theta/2))
    double lambda = 1.0;    // maximizing lambda
    ComplexVector worst;    // coordinates of a maximizing element
    bool finite = true;
};

// Best constant for fixed states, from the generalized eigenvalue problem at each lambda.
ExactConstant certificate_constant(const CbMapSpec& spec, const ComplexMatrix& f, const ComplexMatrix& g);

struct SearchOptions {
    int max_rounds = 60;
    int initial_samples = 24;
    int inner_iterations = 400;
    double gap_tolerance = 1e-3;
    int stall_rounds = 8;           // rounds without a 1e-4 relative improvement before stopping
    double target_constant = kInf;  // feasibility threshold for the infeasibility report
    int probes = 1000;
    std::uint64_t seed = 0xce47;
};

struct SearchResult {
    StateCertificate cert;
    bool feasible = true;   // cert.C <= target_constant
    double gap = 0.0;       // cert.C - target_constant when infeasible
    int rounds = 0;
    int samples = 0;
    PointwiseReport probe_report;  // fresh probe verification
};

SearchResult search_certificate(const CbMapSpec& spec, const SearchOptions& opts = {});

enum class EndpointSide { Row, Column };

struct EndpointResult {
    ComplexMatrix state;
    double C = 0.0;
    bool feasible = true;
    double gap = 0.0;
    std::vector<CheckRow> finite_checks;  // finite forms on random families
};

// Single-state certificate ||ux|| <= C f(xx^*)^(1/2) (Row) or C f(x^*x)^(1/2) (Column).
EndpointResult endpoint_certificate(const CbMapSpec& spec, EndpointSide side, const SearchOptions& opts = {});

struct BlockLemmaReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double max_column_sum = 0.0;  // sup_j sum_i f(a_ij^* a_ij) for the normalized block
    double max_row_sum = 0.0;     // sup_i sum_j g(a_ij a_ij^*)
    std::vector<CheckRow> rows;
};

// a is an nN x nN block matrix with N x N blocks a_ij.
BlockLemmaReport block_lemma_check(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& a, int N, double theta);

// sum_ij s_i^2 ||u(a_ij)||^2 t_j^2 for block matrix a (N x N blocks).
double weighted_block_sum(const CbMapSpec& spec, const ComplexMatrix& a, const RealVector& s, const RealVector& t);

// Eigenvalues projected onto the probability simplex.
ComplexMatrix project_to_density(const ComplexMatrix& h);

}  // namespace opspace
