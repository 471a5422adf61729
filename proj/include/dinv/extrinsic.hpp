#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dinv/delta.hpp"
#include "dinv/geometry.hpp"

namespace dinv {

/// Parametric immersion into Euclidean m-space, m components in n chart
/// variables.
class ImmersionField {
public:
    ImmersionField() = default;
    ImmersionField(int dim, int ambient_dim, std::vector<Expression> components, Box domain,
                   Params params = {});

    int dim() const { return dim_; }
    int ambient_dim() const { return ambient_dim_; }
    const Box& domain() const { return domain_; }
    const Params& params() const { return params_; }
    const std::vector<Expression>& components() const { return components_; }

private:
    int dim_ = 0;
    int ambient_dim_ = 0;
    std::vector<Expression> components_;
    Box domain_;
    Params params_;
};

/// Value, Jacobian and per-component Hessians of the immersion at a point.
struct ImmersionJet {
    Eigen::VectorXd f;                  // m
    Eigen::MatrixXd jac;                // m x n, jac(a,i) = d_i f^a
    std::vector<Eigen::MatrixXd> hess;  // hess[a]: n x n
};

ImmersionJet immersion_jet(const ImmersionField& f, const Point& p);

/// Induced metric g_ij = sum_a d_i f^a d_j f^a with exact first derivatives.
MetricSampler induced_metric_sampler(const ImmersionField& f);
Eigen::MatrixXd induced_metric(const ImmersionField& f, const Point& p);

struct SecondFundamentalForm {
    Eigen::MatrixXd tangent_frame;   // n x n chart coefficients, g-orthonormal
    Eigen::MatrixXd ambient_tangent; // m x n, orthonormal columns J * E
    Eigen::MatrixXd normal_frame;    // m x (m-n), orthonormal columns
    std::vector<Eigen::MatrixXd> h;  // h[r](i,j) = <h(e_i,e_j), nu_r>, symmetric

    int dim() const { return static_cast<int>(tangent_frame.rows()); }
    int codim() const { return static_cast<int>(normal_frame.cols()); }
    /// In an orthonormal tangent frame the shape operator matrix of nu_r
    /// is the component matrix itself.
    const Eigen::MatrixXd& shape_operator(int r) const { return h[r]; }
};

/// h(e_i,e_j) = normal part of the ambient Hessian contracted with the
/// g-orthonormal tangent frame; exact jets, no finite differences.
SecondFundamentalForm second_fundamental_form(const ImmersionField& f, const Point& p);

struct MeanCurvature {
    Eigen::VectorXd H;  // components in the normal frame
    double H2 = 0.0;
};

MeanCurvature mean_curvature(const SecondFundamentalForm& sff);

/// Gauss equation: R(X,Y;Z,W) = <h(X,W),h(Y,Z)> - <h(X,Z),h(Y,W)>, plus the
/// constant-curvature ambient term c (0 for Euclidean).
CurvatureTensor curvature_via_gauss(const SecondFundamentalForm& sff, double ambient_c);

/// Max componentwise difference between the intrinsic finite-difference
/// curvature of the induced metric and the Gauss-equation curvature.
double gauss_residual(const ImmersionField& f, const Point& p);

struct CheckReport {
    std::string check;
    double lhs = 0.0;     // delta
    double rhs = 0.0;     // coefficient * H^2 + ambient term
    double margin = 0.0;  // rhs - lhs
    bool passed = false;
    double tol = 0.0;
};

/// margin = c(t) H^2 + (1/2)(n(n-1) - sum n_j(n_j-1)) c - delta >= -tol.
CheckReport chen_inequality_check(const DeltaResult& d, double H2, const TupleSpec& t,
                                  double ambient_c, double tol = 1e-6);

struct IdealityPoint {
    Point p;
    double H2 = 0.0;
    double dhat0 = 0.0;
    TupleSpec argmax;
    double gap = 0.0;  // |H^2 - dhat0|
};

struct IdealityReport {
    std::vector<IdealityPoint> points;
    bool ideal = false;
    double max_gap = 0.0;
    double tol = 0.0;
};

IdealityReport ideality_check(const ImmersionField& f, const std::vector<Point>& sample,
                              const OptimizerOptions& opts = {}, double tol = 1e-5);

struct EqualityStructureReport {
    double cross_block = 0.0;      // blocks of distinct Delta_i against each other
    double block_trailing = 0.0;   // blocks against the trailing range
    double trailing_umbilic = 0.0; // trailing diagonal minus mu_r I
    double trace_mismatch = 0.0;   // max_j |trace(A^r_j) - mu_r|
    std::vector<double> mu;        // one per normal direction
    bool passed = false;
    double tol = 0.0;
};

/// Verifies the equality-case block form of the shape operators in the
/// minimizing frame s.
EqualityStructureReport equality_structure_check(const SecondFundamentalForm& sff,
                                                 const SubspaceTuple& s, const TupleSpec& t,
                                                 double tol = 1e-5);

}  // namespace dinv
