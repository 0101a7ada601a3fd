#pragma once

#include "opspace/check.hpp"
#include "opspace/matrix_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opspace {

// Subspace of C^m (+) C^m spanned by the columns of `basis` (2m x k); the top m rows are
// the row-space coordinates x, the bottom m rows the column-space coordinates y.
struct SubspaceRC {
    int m = 1;
    ComplexMatrix basis;

    static SubspaceRC from_pairs(const std::vector<std::pair<ComplexVector, ComplexVector>>& pairs);
    void validate() const;
};

// S = H_r (+) G(Lambda) (+) K_c.  The graph part is spanned by (domain_j, lambda_j range_j).
struct XuDecomposition {
    int m = 1;
    ComplexMatrix row_part;      // m x h, orthonormal
    ComplexMatrix col_part;      // m x c, orthonormal
    RealVector lambda;           // graph part, > 0
    ComplexMatrix graph_domain;  // m x g, orthonormal
    ComplexMatrix graph_range;   // m x g, orthonormal
    int degenerate_directions = 0;

    ComplexMatrix reassembled() const;  // 2m x (h + g + c)
};

XuDecomposition xu_decompose(const SubspaceRC& s, double rank_tol = 1e-10);

struct SpectralSplit {
    std::vector<double> lambda1;  // entries in (0,1]
    std::vector<double> lambda2;  // entries > 1
    std::vector<int> index1;
    std::vector<int> index2;
    std::vector<double> all;

    // {i : lambda_i < eps}
    std::vector<int> projector(double eps) const;
    // Lambda_2^(-1), the graph obtained from G(Lambda_2) by swapping the coordinates
    std::vector<double> inverted_lambda2() const;
};

SpectralSplit split_lambda(const std::vector<double>& lambda);

enum class TailKind { BoundedRatio, SquareSummable, Divergent };
enum class TailSide { Auto, Small, Large };

struct TailRule {
    TailKind kind = TailKind::BoundedRatio;
    TailSide side = TailSide::Auto;

    // xi_i = c i^(-s): square summable iff 2s > 1
    static TailRule power_law(double exponent);
    // xi_i = c r^i
    static TailRule geometric(double ratio);
};

struct ClassifyComponent {
    std::vector<double> xi;
    std::optional<TailRule> tail;
};

struct ClassifyInput {
    std::vector<ClassifyComponent> components;
    bool include_row = false;  // an infinite-dimensional H_r summand
    bool include_col = false;  // an infinite-dimensional K_c summand
    double epsilon = 0.5;
};

struct ClassifyResult {
    std::string label;
    std::vector<std::string> factors;
    double small_sum = 0.0;  // sum over xi < eps of xi^2
    double large_sum = 0.0;  // sum over 1/xi < eps of xi^(-2)
    double min_xi = 0.0;
    double max_xi = 0.0;
    std::string note = "heuristic at finite scale";
};

ClassifyResult classify(const ClassifyInput& input);
ClassifyResult classify(const std::vector<double>& xi, const std::optional<TailRule>& tail, double epsilon = 0.5);

// Label with R and C exchanged.
std::string swap_row_column_label(const std::string& label);

struct ProjectionReport {
    ComplexMatrix alpha;
    ComplexMatrix beta;
    double norm_alpha = 0.0;         // CB(R,R)
    double norm_lambda_alpha = 0.0;  // CB(R,C)
    double norm_beta = 0.0;          // CB(C,R)
    double norm_lambda_beta = 0.0;   // CB(C,C)
    double cb_bound = 0.0;
    double lambda_hs = 0.0;
    double identity_error = 0.0;
    double dcb_bound = 0.0;          // ||u||_cb ||u^-1||_cb for u: x -> (x, Lambda x)
    bool valid = true;
    std::string diagnostic;
    std::vector<CheckRow> rows;
};

// P is 2m x 2m acting on (x, y); Lambda is a positive diagonal with ||Lambda|| <= 1.
ProjectionReport projection_decompose(const ComplexMatrix& p, const std::vector<double>& lambda);

// Projection onto G(Lambda) with alpha = I - beta Lambda.
ComplexMatrix graph_projection(const ComplexMatrix& beta, const std::vector<double>& lambda);

// Square root of the sum of the n largest lambda_i^2 over {i : lambda_i < eps}.
double pi2n(const std::vector<double>& lambda, double eps, int n);

// Brute force over all n-subsets of the selected coordinates.
double pi2n_subsets(const std::vector<double>& lambda, double eps, int n);

struct Pi2nProbeReport {
    double min_slack = 0.0;
    int probes = 0;
    std::vector<CheckRow> rows;
};

// Probes w(a) = V a xi into range E(eps) with random a_i in M_k.
Pi2nProbeReport pi2n_probes(const std::vector<double>& lambda, double eps, int n, int probes, std::uint64_t seed);

}  // namespace opspace
