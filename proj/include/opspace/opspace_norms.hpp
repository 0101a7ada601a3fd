#pragma once

#include "opspace/matrix_core.hpp"
#include "opspace/theta.hpp"

#include <string>
#include <vector>

namespace opspace {

enum class SpaceKind { Row, Column, RTheta, RcapC, WeightedDiag, Graph, DirectSum };

// RC: graph {(x, Lambda x)} inside R (+) C.  CR: the same graph inside C (+) R.
enum class GraphOrientation { RC, CR };

struct OpSpaceDescriptor {
    SpaceKind kind = SpaceKind::Row;
    int n = 1;
    double theta = 0.5;
    std::vector<double> weights;  // xi for WeightedDiag, Lambda for Graph
    GraphOrientation orientation = GraphOrientation::RC;
    std::vector<OpSpaceDescriptor> summands;

    static OpSpaceDescriptor row(int n);
    static OpSpaceDescriptor column(int n);
    static OpSpaceDescriptor rtheta(int n, double theta);
    static OpSpaceDescriptor oh(int n);
    static OpSpaceDescriptor rcapc(int n);
    static OpSpaceDescriptor weighted_diag(std::vector<double> xi);
    static OpSpaceDescriptor graph(std::vector<double> lambda, GraphOrientation o = GraphOrientation::RC);
    static OpSpaceDescriptor direct_sum(std::vector<OpSpaceDescriptor> parts);

    int dimension() const;
    std::string name() const;
    void validate() const;
};

struct MatrixElement {
    std::vector<ComplexMatrix> coefficients;
    OpSpaceDescriptor space;
};

struct NormOptions {
    int multistart = 16;
    int max_iterations = 3000;
    double tolerance = 1e-13;        // relative increase that counts as stalled
    std::uint64_t seed = 0x0b5e55ed;
    bool closed_form_at_half = true; // use ||sum a (x) conj(a)||^(1/2) at theta = 1/2
};

struct NormResult {
    double value = 0.0;
    bool converged = true;
    bool stale = false;            // iteration cap hit; value is the best lower bound
    std::vector<int> argmax;       // active summands for DirectSum
    int iterations = 0;
};

// sqrt(||sum a_i a_i^*||) and sqrt(||sum a_i^* a_i||).
double row_value(const std::vector<ComplexMatrix>& a);
double column_value(const std::vector<ComplexMatrix>& a);

// ||sum a_k (x) conj(a_k)||^(1/2), the OH norm.
double oh_closed_form(const std::vector<ComplexMatrix>& a);

// Sup-form solution for (C,R)_theta: value^2 = sup tr(S Phi(T)) over S,T >= 0 with
// ||S||_{p'} <= 1, ||T||_p <= 1 where Phi(T) = sum a T a^*.  S = s^2, T = t^2 for the
// pair (s,t) with tr s^(2p') <= 1, tr t^(2p) <= 1.
struct RThetaSolution {
    double value = 0.0;
    ComplexMatrix s_sq;
    ComplexMatrix t_sq;
    bool converged = true;
    int iterations = 0;
};

RThetaSolution rtheta_sup_norm(const std::vector<ComplexMatrix>& a, double theta, const NormOptions& opts = {},
                               const ComplexMatrix* warm_t_sq = nullptr);

// Objective (sum ||s a_i t||_2^2)^(1/2) for given s,t.
double rtheta_objective(const std::vector<ComplexMatrix>& a, const ComplexMatrix& s, const ComplexMatrix& t);

// Same objective written with s^theta, t^(1-theta) and Hilbert-Schmidt constraints.
double rtheta_intro_objective(const std::vector<ComplexMatrix>& a, double theta, const ComplexMatrix& s,
                              const ComplexMatrix& t);

// sqrt of the norm of x -> sum a_i^* x a_i on S_{p'}, by nonlinear power iteration over
// general complex x.
double cp_map_schatten_norm(const std::vector<ComplexMatrix>& a, double p_prime, const NormOptions& opts = {});

NormResult mn_norm_detail(const MatrixElement& x, const NormOptions& opts = {});
double mn_norm(const MatrixElement& x, const NormOptions& opts = {});

enum class HilbertSide { Row, Column };

// cb norm between R_n and C_n: Hilbert-Schmidt for R<->C, operator norm otherwise.
double cb_norm_exact(const ComplexMatrix& u, HilbertSide from, HilbertSide to);

}  // namespace opspace
