#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dinv/expr.hpp"

namespace dinv {

using Point = Eigen::VectorXd;
using Params = std::map<std::string, double>;

/// Axis-aligned coordinate box.
struct Box {
    std::vector<std::array<double, 2>> axes;  // {lo, hi} per coordinate

    int dim() const { return static_cast<int>(axes.size()); }
    bool contains(const Point& p, double margin = 0.0) const;
    double width(int axis) const { return axes[axis][1] - axes[axis][0]; }
    Point center() const;
};

/// Metric value and first derivatives at a point; all the curvature
/// pipeline needs from a metric source.
struct MetricJet {
    Eigen::MatrixXd g;                // n x n, symmetric
    std::vector<Eigen::MatrixXd> dg;  // dg[k](i,j) = d_k g_ij
};

using MetricSampler = std::function<MetricJet(const Point&)>;

/// Riemannian metric given by expression entries g_ij(u).
class MetricField {
public:
    MetricField() = default;
    MetricField(int dim, std::vector<std::vector<Expression>> entries, Box domain,
                Params params = {});

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    const Params& params() const { return params_; }
    const Expression& entry(int i, int j) const { return entries_[i][j]; }

    /// g(p); rejects non-SPD samples (smallest eigenvalue <= 1e-12).
    Eigen::MatrixXd evaluate(const Point& p) const;
    MetricJet jet(const Point& p) const;
    MetricSampler sampler() const;

private:
    int dim_ = 0;
    std::vector<std::vector<Expression>> entries_;
    Box domain_;
    Params params_;
};

/// Curvature 4-tensor R(e_i,e_j;e_k,e_l) in a g-orthonormal frame.
/// Antisymmetry in (i,j) and (k,l) is exact by construction; pair symmetry
/// and the first Bianchi identity hold to numerical tolerance.
/// Sign convention: K(e_i ^ e_j) = R_ijji, unit sphere gives +1.
class CurvatureTensor {
public:
    CurvatureTensor() = default;
    /// comps is a dense row-major n^4 array; it is antisymmetrized exactly.
    CurvatureTensor(int dim, std::vector<double> comps, Eigen::MatrixXd frame);

    static CurvatureTensor constant_curvature(int n, double c);
    static CurvatureTensor zero(int n) { return constant_curvature(n, 0.0); }

    int dim() const { return dim_; }
    double at(int i, int j, int k, int l) const {
        return comps_[static_cast<size_t>(((i * dim_ + j) * dim_ + k)) * dim_ + l];
    }
    const std::vector<double>& components() const { return comps_; }
    const Eigen::MatrixXd& frame() const { return frame_; }

    /// R(u,v;v,u); the sectional curvature when u,v are orthonormal.
    double quad(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

    /// Components in the rotated frame e'_a = sum_i Q(i,a) e_i.
    CurvatureTensor rotated(const Eigen::MatrixXd& Q) const;

    /// Fits the nearest constant-curvature value; residual is the max
    /// componentwise deviation from that model.
    double constant_curvature_fit(double& c_out) const;

    double pair_symmetry_residual() const;
    double bianchi_residual() const;

private:
    int dim_ = 0;
    std::vector<double> comps_;
    Eigen::MatrixXd frame_;
};

/// Two g-orthonormal tangent vectors, in frame coordinates.
struct PlaneSection {
    Eigen::VectorXd e1, e2;
};

/// Modified Gram-Schmidt of the coordinate directions against g;
/// columns of the result satisfy E^T g E = I.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& g);

/// Gamma[k](i,j) = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
std::vector<Eigen::MatrixXd> christoffel(const MetricJet& mj);
std::vector<Eigen::MatrixXd> christoffel(const MetricField& g, const Point& p);

/// Curvature from the metric: exact-jet Christoffels, one central
/// finite-difference layer for their derivatives, lowered by g and
/// expressed in the Gram-Schmidt orthonormal frame.
CurvatureTensor riemann_from_metric(const MetricSampler& g, int dim, const Point& p,
                                    const Eigen::VectorXd& steps);
CurvatureTensor riemann_from_metric(const MetricField& g, const Point& p);

double sectional_curvature(const CurvatureTensor& R, const PlaneSection& pi,
                           double ortho_tol = 1e-10);

/// Symmetric matrix Q with u^T Q u = Ric(u) = sum_j K(u ^ e_j) for unit u.
Eigen::MatrixXd ricci_form(const CurvatureTensor& R);

/// tau = sum_{i<j} K(e_i ^ e_j).
double scalar_tau(const CurvatureTensor& R);

}  // namespace dinv
