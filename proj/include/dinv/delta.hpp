#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dinv/combinatorics.hpp"
#include "dinv/geometry.hpp"

namespace dinv {

struct OptimizerOptions {
    int restarts = 32;       // identity seed + Ricci eigenbasis seed + random seeds
    int max_iters = 400;     // Givens sweeps per restart
    double tol = 1e-12;      // stop when a sweep improves the objective by less
    std::uint64_t seed = 20240915;  // master seed; per-restart streams derive from it
    int dhat0_dim_cap = 8;
};

/// Orthonormal frame whose leading columns span the blocks L_1,...,L_k;
/// the remaining columns span the trailing complement.
struct SubspaceTuple {
    Eigen::MatrixXd frame;  // n x n, frame^T frame = I
    TupleSpec tuple;

    /// [begin, end) column range of block j (0-based).
    std::pair<int, int> block_range(int j) const;
    int trailing_begin() const { return tuple.sum(); }
};

struct DeltaResult {
    double tau = 0.0;
    double inf_sum = 0.0;     // achieved minimum of tau(L_1)+...+tau(L_k)
    double delta = 0.0;       // tau - inf_sum
    double coeff_c = 0.0;     // normalizing coefficient c(n_1,...,n_k)
    double normalized = 0.0;  // delta / coeff_c
    SubspaceTuple minimizer;
    int restarts_used = 0;
    bool certified = false;  // closed form applies (k=0, t=(n-1), constant curvature)
    bool converged = true;
};

/// tau(L) = sum_{a<b} K(b_a ^ b_b) over the given orthonormal basis of L.
double tau_of_subspace(const CurvatureTensor& R, const std::vector<Eigen::VectorXd>& basis,
                       double ortho_tol = 1e-8);

/// c(n_1,...,n_k) = n^2 (n+k-1-sum) / (2 (n+k-sum)); n(n-1)/2 for the empty tuple.
double normalizing_coefficient(int n, const TupleSpec& t);

/// delta(n_1,...,n_k) = tau - inf over mutually orthogonal subspace tuples,
/// minimized over orthonormal frames by Givens-rotation coordinate descent
/// with exact per-rotation angle minimization, across deterministic restarts.
DeltaResult delta_invariant(const CurvatureTensor& R, const TupleSpec& t,
                            const OptimizerOptions& opts = {});

using DeltaMap = std::map<TupleSpec, DeltaResult, TupleLess>;

/// delta_invariant over every tuple of S(n).
DeltaMap delta_all(const CurvatureTensor& R, const OptimizerOptions& opts = {});

/// Maximal normalized invariant and its arg-max tuple (ties: smaller k,
/// then lexicographic).
std::pair<double, TupleSpec> delta_hat0(const CurvatureTensor& R,
                                        const OptimizerOptions& opts = {});
std::pair<double, TupleSpec> delta_hat0(const DeltaMap& results, int n);

struct MaxPrincipleReport {
    bool passed = false;
    double max_violation = 0.0;  // max over t of Delta(t) - Delta(t_equal)
    TupleSpec worst;
    double tol = 0.0;
};

/// After H^2 = Delta(t_equal) is established at a point, Delta(t_equal)
/// must dominate every other normalized invariant.
MaxPrincipleReport maximum_principle_check(const DeltaMap& results, const TupleSpec& t_equal,
                                           double tol = 1e-6);

}  // namespace dinv
