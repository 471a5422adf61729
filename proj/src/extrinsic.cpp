#include "dinv/extrinsic.hpp"

#include <cmath>
#include <stdexcept>

namespace dinv {

ImmersionField::ImmersionField(int dim, int ambient_dim, std::vector<Expression> components,
                               Box domain, Params params)
    : dim_(dim),
      ambient_dim_(ambient_dim),
      components_(std::move(components)),
      domain_(std::move(domain)),
      params_(std::move(params)) {
    if (dim_ < 1 || ambient_dim_ <= dim_)
        throw std::invalid_argument("ImmersionField: need ambient_dim > dim >= 1");
    if (components_.size() != static_cast<size_t>(ambient_dim_))
        throw std::invalid_argument("ImmersionField: component count != ambient_dim");
    if (domain_.dim() != dim_) throw std::invalid_argument("ImmersionField: domain dim mismatch");
}

ImmersionJet immersion_jet(const ImmersionField& f, const Point& p) {
    const int n = f.dim(), m = f.ambient_dim();
    ImmersionJet jet;
    jet.f.resize(m);
    jet.jac.resize(m, n);
    jet.hess.resize(m);
    for (int a = 0; a < m; ++a) {
        Jet2 j = f.components()[a].eval_jet2(p, f.params());
        jet.f[a] = j.value;
        jet.jac.row(a) = j.grad.transpose();
        jet.hess[a] = j.hess;
    }
    return jet;
}

Eigen::MatrixXd induced_metric(const ImmersionField& f, const Point& p) {
    ImmersionJet jet = immersion_jet(f, p);
    return jet.jac.transpose() * jet.jac;
}

MetricSampler induced_metric_sampler(const ImmersionField& f) {
    ImmersionField copy = f;
    return [copy](const Point& p) {
        ImmersionJet jet = immersion_jet(copy, p);
        const int n = copy.dim(), m = copy.ambient_dim();
        MetricJet mj;
        mj.g = jet.jac.transpose() * jet.jac;
        mj.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
        // d_k g_ij = sum_a (H_a(k,i) J(a,j) + J(a,i) H_a(k,j))
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double acc = 0.0;
                    for (int a = 0; a < m; ++a)
                        acc += jet.hess[a](k, i) * jet.jac(a, j) +
                               jet.jac(a, i) * jet.hess[a](k, j);
                    mj.dg[k](i, j) = acc;
                    mj.dg[k](j, i) = acc;
                }
        return mj;
    };
}

SecondFundamentalForm second_fundamental_form(const ImmersionField& f, const Point& p) {
    const int n = f.dim(), m = f.ambient_dim();
    ImmersionJet jet = immersion_jet(f, p);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jet.jac);
    if (svd.singularValues().minCoeff() <= 1e-8)
        throw EvalError("second_fundamental_form: rank-deficient Jacobian (not an immersion)");

    Eigen::MatrixXd G = jet.jac.transpose() * jet.jac;
    Eigen::MatrixXd E = gram_schmidt(G);
    Eigen::MatrixXd T = jet.jac * E;  // m x n, orthonormal columns

    // normal frame: Gram-Schmidt the ambient basis against the tangent image
    Eigen::MatrixXd N(m, m - n);
    int found = 0;
    for (int a = 0; a < m && found < m - n; ++a) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(m, a);
        v -= T * (T.transpose() * v);
        for (int r = 0; r < found; ++r) v -= N.col(r).dot(v) * N.col(r);
        double norm = v.norm();
        if (norm > 1e-8) {
            v /= norm;
            // deterministic orientation: largest-magnitude entry positive
            int imax;
            v.cwiseAbs().maxCoeff(&imax);
            if (v[imax] < 0.0) v = -v;
            N.col(found++) = v;
        }
    }
    if (found != m - n)
        throw EvalError("second_fundamental_form: could not build a full normal frame");

    SecondFundamentalForm sff;
    sff.tangent_frame = E;
    sff.ambient_tangent = T;
    sff.normal_frame = N;
    sff.h.assign(m - n, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Eigen::VectorXd S(m);
            for (int a = 0; a < m; ++a) S[a] = E.col(i).dot(jet.hess[a] * E.col(j));
            for (int r = 0; r < m - n; ++r) {
                double v = N.col(r).dot(S);
                sff.h[r](i, j) = v;
                sff.h[r](j, i) = v;
            }
        }
    return sff;
}

MeanCurvature mean_curvature(const SecondFundamentalForm& sff) {
    MeanCurvature mc;
    const int n = sff.dim(), cod = sff.codim();
    mc.H.resize(cod);
    for (int r = 0; r < cod; ++r) mc.H[r] = sff.h[r].trace() / n;
    mc.H2 = mc.H.squaredNorm();
    return mc;
}

CurvatureTensor curvature_via_gauss(const SecondFundamentalForm& sff, double ambient_c) {
    const int n = sff.dim(), cod = sff.codim();
    std::vector<double> comps(static_cast<size_t>(n) * n * n * n, 0.0);
    auto idx = [n](int i, int j, int k, int l) {
        return static_cast<size_t>(((i * n + j) * n + k)) * n + l;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int r = 0; r < cod; ++r)
                        acc += sff.h[r](i, l) * sff.h[r](j, k) - sff.h[r](i, k) * sff.h[r](j, l);
                    double dil = (i == l) ? 1.0 : 0.0;
                    double djk = (j == k) ? 1.0 : 0.0;
                    double dik = (i == k) ? 1.0 : 0.0;
                    double djl = (j == l) ? 1.0 : 0.0;
                    comps[idx(i, j, k, l)] = acc + ambient_c * (dil * djk - dik * djl);
                }
    return CurvatureTensor(n, std::move(comps), sff.tangent_frame);
}

double gauss_residual(const ImmersionField& f, const Point& p) {
    const int n = f.dim();
    Eigen::VectorXd steps(n);
    for (int d = 0; d < n; ++d) steps[d] = 1e-4 * f.domain().width(d);
    CurvatureTensor intrinsic = riemann_from_metric(induced_metric_sampler(f), n, p, steps);
    CurvatureTensor gauss = curvature_via_gauss(second_fundamental_form(f, p), 0.0);
    double res = 0.0;
    for (size_t i = 0; i < intrinsic.components().size(); ++i)
        res = std::max(res, std::abs(intrinsic.components()[i] - gauss.components()[i]));
    return res;
}

CheckReport chen_inequality_check(const DeltaResult& d, double H2, const TupleSpec& t,
                                  double ambient_c, double tol) {
    if (!(d.minimizer.tuple == t))
        throw std::invalid_argument("chen_inequality_check: tuple/result mismatch");
    const int n = t.n;
    double sum_nj = 0.0;
    for (int p : t.parts) sum_nj += p * (p - 1.0);
    CheckReport rep;
    rep.check = "chen";
    rep.lhs = d.delta;
    rep.rhs = normalizing_coefficient(n, t) * H2 + 0.5 * (n * (n - 1.0) - sum_nj) * ambient_c;
    rep.margin = rep.rhs - rep.lhs;
    rep.tol = tol;
    rep.passed = rep.margin >= -tol;
    return rep;
}

IdealityReport ideality_check(const ImmersionField& f, const std::vector<Point>& sample,
                              const OptimizerOptions& opts, double tol) {
    IdealityReport rep;
    rep.tol = tol;
    for (const Point& p : sample) {
        SecondFundamentalForm sff = second_fundamental_form(f, p);
        CurvatureTensor R = curvature_via_gauss(sff, 0.0);
        auto [dhat, arg] = delta_hat0(R, opts);
        IdealityPoint ip;
        ip.p = p;
        ip.H2 = mean_curvature(sff).H2;
        ip.dhat0 = dhat;
        ip.argmax = arg;
        ip.gap = std::abs(ip.H2 - dhat);
        rep.max_gap = std::max(rep.max_gap, ip.gap);
        rep.points.push_back(std::move(ip));
    }
    rep.ideal = rep.max_gap <= tol;
    return rep;
}

EqualityStructureReport equality_structure_check(const SecondFundamentalForm& sff,
                                                 const SubspaceTuple& s, const TupleSpec& t,
                                                 double tol) {
    if (!(s.tuple == t))
        throw std::invalid_argument("equality_structure_check: frame/tuple mismatch");
    const int n = sff.dim(), cod = sff.codim();
    const int mu_begin = t.sum();
    const Eigen::MatrixXd& Q = s.frame;

    EqualityStructureReport rep;
    rep.tol = tol;
    for (int r = 0; r < cod; ++r) {
        Eigen::MatrixXd A = Q.transpose() * sff.shape_operator(r) * Q;

        double mu;
        if (mu_begin < n) {
            mu = A.bottomRightCorner(n - mu_begin, n - mu_begin).trace() / (n - mu_begin);
        } else {
            mu = 0.0;
            for (int j = 0; j < t.k(); ++j) {
                auto [b0, b1] = s.block_range(j);
                mu += A.block(b0, b0, b1 - b0, b1 - b0).trace();
            }
            mu /= std::max(1, t.k());
        }
        rep.mu.push_back(mu);

        for (int j = 0; j < t.k(); ++j) {
            auto [a0, a1] = s.block_range(j);
            for (int i2 = j + 1; i2 < t.k(); ++i2) {
                auto [c0, c1] = s.block_range(i2);
                rep.cross_block = std::max(
                    rep.cross_block, A.block(a0, c0, a1 - a0, c1 - c0).cwiseAbs().maxCoeff());
            }
            if (mu_begin < n)
                rep.block_trailing =
                    std::max(rep.block_trailing,
                             A.block(a0, mu_begin, a1 - a0, n - mu_begin).cwiseAbs().maxCoeff());
            rep.trace_mismatch = std::max(
                rep.trace_mismatch, std::abs(A.block(a0, a0, a1 - a0, a1 - a0).trace() - mu));
        }
        if (mu_begin < n) {
            Eigen::MatrixXd trail = A.bottomRightCorner(n - mu_begin, n - mu_begin) -
                                    mu * Eigen::MatrixXd::Identity(n - mu_begin, n - mu_begin);
            rep.trailing_umbilic = std::max(rep.trailing_umbilic, trail.cwiseAbs().maxCoeff());
        }
    }
    rep.passed = rep.cross_block <= tol && rep.block_trailing <= tol &&
                 rep.trailing_umbilic <= tol && rep.trace_mismatch <= tol;
    return rep;
}

}  // namespace dinv
