#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dinv/extrinsic.hpp"

namespace dinv {

/// Complex structure of C^n on R^2n: J(x, y) = (-y, x), first n ambient
/// coordinates are real parts.
Eigen::MatrixXd complex_structure(int n);

/// max_{i,j} |<J T_i, T_j>| over the orthonormal tangent frame;
/// 0 iff the immersion is Lagrangian at p.
double lagrangian_check(const ImmersionField& f, const Point& p);

/// Whitney immersion S^n -> C^n in the inverse-stereographic chart with
/// the double point at the chart origin.
ImmersionField whitney_immersion(int n);

enum class LagrangianCase { L1, L2, L3 };

/// The H^2 coefficient of the selected Lagrangian inequality.
/// L2 requires sum n_i < n; L3 requires sum n_i = n.
double lagrangian_coefficient(int n, const TupleSpec& t, LagrangianCase which);

CheckReport lagrangian_inequality_check(const DeltaResult& d, double H2, const TupleSpec& t,
                                        double ambient_c, LagrangianCase which,
                                        double tol = 1e-6);

/// Second fundamental form of a Lagrangian point expressed against the
/// J-adapted normal frame J e_1, ..., J e_n; cubic[c](i,j) = <h(e_i,e_j), J e_c>.
struct LagrangianData {
    SecondFundamentalForm sff;
    std::vector<Eigen::MatrixXd> cubic;
    double symplectic_residual = 0.0;
    double cubic_symmetry_residual = 0.0;

    int dim() const { return static_cast<int>(cubic.size()); }
    static LagrangianData from_cubic(std::vector<Eigen::MatrixXd> cubic);
};

/// Builds Lagrangian point data; rejects points whose symplectic residual
/// exceeds 1e-8.
LagrangianData lagrangian_data(const ImmersionField& f, const Point& p);

struct MinimalityFlag {
    Point p;
    double equality_residual = 0.0;
    double H2 = 0.0;
};

struct MinimalityReport {
    std::vector<MinimalityFlag> flagged;
    bool passed = false;  // no flagged points
    double eps_eq = 0.0, eps_H = 0.0;
};

/// Flags points where the L1 equality residual is below eps_eq while
/// H^2 > eps_H. Thm-level prediction: the list stays empty.
MinimalityReport minimality_at_equality_check(const ImmersionField& f,
                                              const std::vector<Point>& points, const TupleSpec& t,
                                              double ambient_c = 0.0,
                                              const OptimizerOptions& opts = {},
                                              double eps_eq = 1e-6, double eps_H = 1e-6);

/// Data-level variant for synthetic cases: (delta, H2) pairs per point.
MinimalityReport minimality_flags(const std::vector<std::pair<double, double>>& delta_h2, int n,
                                  const TupleSpec& t, double ambient_c, double eps_eq = 1e-6,
                                  double eps_H = 1e-6);

struct L2EqualityReport {
    double residual = 0.0;  // best over trailing-index candidates
    int mu_index = -1;      // chosen distinguished index (0-based)
    double lambda = 0.0;
    bool passed = false;
    double tol = 0.0;
};

/// Residuals of the equality pattern of the improved inequality (case
/// sum n_i < n) in the minimizing frame.
L2EqualityReport equality_form_check_L2(const LagrangianData& data, const SubspaceTuple& s,
                                        const TupleSpec& t, double tol = 1e-5);

struct L3EqualityReport {
    double res_a = 0.0;
    double res_b = 0.0;
    double res_c = 0.0;
    bool passed = false;
    double tol = 0.0;
};

/// Conditions (a)-(c) of the partition case (sum n_i = n); triples of
/// three distinct indices inside one block are unconstrained.
L3EqualityReport equality_conditions_check_L3(const LagrangianData& data, const SubspaceTuple& s,
                                              const TupleSpec& t, double tol = 1e-5);

}  // namespace dinv
