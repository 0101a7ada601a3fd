#pragma once

#include "opspace/opspace_norms.hpp"

namespace opspace {

// Domain of a linear map: either a Hilbertian operator space with a descriptor, or the
// full matrix algebra M_N with the matrix-unit basis e_pq (index p*N + q).
struct CbSource {
    bool matrix_algebra = false;
    int algebra_dim = 0;
    OpSpaceDescriptor space;

    static CbSource descriptor(OpSpaceDescriptor d);
    static CbSource algebra(int n);
    int dimension() const;
};

// u(e_j) = sum_i matrix(i, j) f_i.
struct LinearMapSpec {
    CbSource source;
    OpSpaceDescriptor target;
    ComplexMatrix matrix;
};

struct CbEstimateOptions {
    int level = 2;
    int iterations = 400;     // mutation steps per level
    int restarts = 3;         // fresh random starts at each level besides the warm start
    double initial_step = 0.5;
    int polish_steps = 40;    // finite-difference ascent steps after the random search
    std::uint64_t seed = 0xcb0cb0;
    NormOptions inner{4, 400, 1e-12, 0x1a2b, true};
};

struct CbEstimateResult {
    double value = 0.0;
    std::vector<double> per_level;  // nondecreasing
    bool certified = true;          // false when the source norm itself is a solver estimate
    int evaluations = 0;
};

// Lower bound for ||u||_cb: sup over levels 1..k of ||(id (x) u) x|| / ||x|| for optimized x.
CbEstimateResult cb_norm_level_estimate(const LinearMapSpec& u, const CbEstimateOptions& opts = {});

// Coefficients of (id (x) u)(x) for x in M_k(E), x = sum_j a_j (x) e_j.
std::vector<ComplexMatrix> apply_map(const ComplexMatrix& u, const std::vector<ComplexMatrix>& a);

// Coefficients x_pq in M_k of a kN x kN matrix x = sum x_pq (x) e_pq (block row r, column s
// of size N holds the entries x_pq(r, s)).
std::vector<ComplexMatrix> algebra_coefficients(const ComplexMatrix& x, int n);

}  // namespace opspace
