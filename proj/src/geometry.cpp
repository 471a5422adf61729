#include "dinv/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dinv {

bool Box::contains(const Point& p, double margin) const {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        double m = margin * width(i);
        if (p[i] < axes[i][0] + m || p[i] > axes[i][1] - m) return false;
    }
    return true;
}

Point Box::center() const {
    Point c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (axes[i][0] + axes[i][1]);
    return c;
}

// ---------------------------------------------------------------------------

MetricField::MetricField(int dim, std::vector<std::vector<Expression>> entries, Box domain,
                         Params params)
    : dim_(dim), entries_(std::move(entries)), domain_(std::move(domain)), params_(std::move(params)) {
    if (dim_ < 1) throw std::invalid_argument("MetricField: dim must be >= 1");
    if (entries_.size() != static_cast<size_t>(dim_))
        throw std::invalid_argument("MetricField: entry rows != dim");
    for (const auto& row : entries_)
        if (row.size() != static_cast<size_t>(dim_))
            throw std::invalid_argument("MetricField: entry cols != dim");
    if (domain_.dim() != dim_) throw std::invalid_argument("MetricField: domain dim mismatch");
}

Eigen::MatrixXd MetricField::evaluate(const Point& p) const {
    Eigen::MatrixXd g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            double v = entries_[i][j].eval(p, params_);
            g(i, j) = v;
            g(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw EvalError("metric is not positive definite at the sampled point");
    return g;
}

MetricJet MetricField::jet(const Point& p) const {
    MetricJet mj;
    mj.g.resize(dim_, dim_);
    mj.dg.assign(dim_, Eigen::MatrixXd(dim_, dim_));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            Jet2 jv = entries_[i][j].eval_jet2(p, params_);
            mj.g(i, j) = jv.value;
            mj.g(j, i) = jv.value;
            for (int k = 0; k < dim_; ++k) {
                mj.dg[k](i, j) = jv.grad[k];
                mj.dg[k](j, i) = jv.grad[k];
            }
        }
    return mj;
}

MetricSampler MetricField::sampler() const {
    MetricField copy = *this;
    return [copy](const Point& p) { return copy.jet(p); };
}

// ---------------------------------------------------------------------------

CurvatureTensor::CurvatureTensor(int dim, std::vector<double> comps, Eigen::MatrixXd frame)
    : dim_(dim), frame_(std::move(frame)) {
    const size_t n4 = static_cast<size_t>(dim) * dim * dim * dim;
    if (comps.size() != n4) throw std::invalid_argument("CurvatureTensor: bad component count");
    comps_.assign(n4, 0.0);
    auto idx = [dim](int i, int j, int k, int l) {
        return static_cast<size_t>(((i * dim + j) * dim + k)) * dim + l;
    };
    // Exact antisymmetrization in (i,j) and (k,l): the grouping below makes
    // sign flips bit-exact under index swaps.
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    double t1 = comps[idx(i, j, k, l)] - comps[idx(j, i, k, l)];
                    double t2 = comps[idx(j, i, l, k)] - comps[idx(i, j, l, k)];
                    comps_[idx(i, j, k, l)] = 0.25 * (t1 + t2);
                }
    // Pair-symmetry projection (averaging also damps the finite-difference
    // noise of the intrinsic path); negation exactness keeps the
    // antisymmetries bit-exact.
    std::vector<double> sym(comps_.size());
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l)
                    sym[idx(i, j, k, l)] =
                        0.5 * (comps_[idx(i, j, k, l)] + comps_[idx(k, l, i, j)]);
    comps_ = std::move(sym);
}

CurvatureTensor CurvatureTensor::constant_curvature(int n, double c) {
    std::vector<double> comps(static_cast<size_t>(n) * n * n * n, 0.0);
    auto idx = [n](int i, int j, int k, int l) {
        return static_cast<size_t>(((i * n + j) * n + k)) * n + l;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double dil = (i == l) ? 1.0 : 0.0;
                    double djk = (j == k) ? 1.0 : 0.0;
                    double dik = (i == k) ? 1.0 : 0.0;
                    double djl = (j == l) ? 1.0 : 0.0;
                    comps[idx(i, j, k, l)] = c * (dil * djk - dik * djl);
                }
    return CurvatureTensor(n, std::move(comps), Eigen::MatrixXd::Identity(n, n));
}

double CurvatureTensor::quad(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            double uv = u[i] * v[j];
            if (uv == 0.0) continue;
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l) acc += at(i, j, k, l) * uv * v[k] * u[l];
        }
    return acc;
}

CurvatureTensor CurvatureTensor::rotated(const Eigen::MatrixXd& Q) const {
    const int n = dim_;
    // contract one index at a time
    std::vector<double> t0 = comps_, t1(comps_.size(), 0.0);
    auto idx = [n](int i, int j, int k, int l) {
        return static_cast<size_t>(((i * n + j) * n + k)) * n + l;
    };
    for (int pass = 0; pass < 4; ++pass) {
        std::fill(t1.begin(), t1.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double v = t0[idx(i, j, k, l)];
                        if (v == 0.0) continue;
                        // rotate the last index, then cycle so each pass
                        // rotates a fresh index
                        for (int a = 0; a < n; ++a) t1[idx(a, i, j, k)] += v * Q(l, a);
                    }
        std::swap(t0, t1);
    }
    return CurvatureTensor(n, std::move(t0), frame_ * Q);
}

double CurvatureTensor::constant_curvature_fit(double& c_out) const {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (i != j) sum += at(i, j, j, i);
    c_out = (dim_ > 1) ? sum / (dim_ * (dim_ - 1)) : 0.0;
    double res = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l) {
                    double dil = (i == l) ? 1.0 : 0.0;
                    double djk = (j == k) ? 1.0 : 0.0;
                    double dik = (i == k) ? 1.0 : 0.0;
                    double djl = (j == l) ? 1.0 : 0.0;
                    res = std::max(res, std::abs(at(i, j, k, l) - c_out * (dil * djk - dik * djl)));
                }
    return res;
}

double CurvatureTensor::pair_symmetry_residual() const {
    double res = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l)
                    res = std::max(res, std::abs(at(i, j, k, l) - at(k, l, i, j)));
    return res;
}

double CurvatureTensor::bianchi_residual() const {
    double res = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l)
                    res = std::max(res,
                                   std::abs(at(i, j, k, l) + at(j, k, i, l) + at(k, i, j, l)));
    return res;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& g) {
    const int n = static_cast<int>(g.rows());
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, a);
        for (int b = 0; b < a; ++b) {
            double coef = E.col(b).dot(g * v);
            v -= coef * E.col(b);
        }
        double norm2 = v.dot(g * v);
        if (!(norm2 > 1e-24)) throw EvalError("gram_schmidt: degenerate metric");
        E.col(a) = v / std::sqrt(norm2);
    }
    return E;
}

std::vector<Eigen::MatrixXd> christoffel(const MetricJet& mj) {
    const int n = static_cast<int>(mj.g.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mj.g);
    double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 1e-12 || lmax / lmin > 1e12)
        throw EvalError("christoffel: singular or ill-conditioned metric");
    Eigen::MatrixXd ginv = mj.g.inverse();

    std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ginv(k, l) * (mj.dg[i](j, l) + mj.dg[j](i, l) - mj.dg[l](i, j));
                gamma[k](i, j) = 0.5 * acc;
                gamma[k](j, i) = gamma[k](i, j);
            }
    return gamma;
}

std::vector<Eigen::MatrixXd> christoffel(const MetricField& g, const Point& p) {
    if (!g.domain().contains(p)) throw EvalError("christoffel: point outside domain");
    return christoffel(g.jet(p));
}

CurvatureTensor riemann_from_metric(const MetricSampler& g, int n, const Point& p,
                                    const Eigen::VectorXd& steps) {
    MetricJet mj = g(p);
    std::vector<Eigen::MatrixXd> gamma = christoffel(mj);

    // dGamma[d][k](i,j) = d_d Gamma^k_ij, central differences on exact jets
    std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
    for (int d = 0; d < n; ++d) {
        Point pp = p, pm = p;
        pp[d] += steps[d];
        pm[d] -= steps[d];
        auto gp = christoffel(g(pp));
        auto gm = christoffel(g(pm));
        dgamma[d].resize(n);
        for (int k = 0; k < n; ++k) dgamma[d][k] = (gp[k] - gm[k]) / (2.0 * steps[d]);
    }

    // R^l_{ijk} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    // lowered against g: R(d_i,d_j;d_k,d_l) = g_lm R^m_{ijk}
    std::vector<double> low(static_cast<size_t>(n) * n * n * n, 0.0);
    auto idx = [n](int i, int j, int k, int l) {
        return static_cast<size_t>(((i * n + j) * n + k)) * n + l;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) {
                    double up = dgamma[i][m](j, k) - dgamma[j][m](i, k);
                    for (int q = 0; q < n; ++q)
                        up += gamma[m](i, q) * gamma[q](j, k) - gamma[m](j, q) * gamma[q](i, k);
                    for (int l = 0; l < n; ++l) low[idx(i, j, k, l)] += mj.g(l, m) * up;
                }

    Eigen::MatrixXd E = gram_schmidt(mj.g);
    // frame transform: R_abcd = R_ijkl E(i,a) E(j,b) E(k,c) E(l,d)
    std::vector<double> t0 = std::move(low), t1(t0.size(), 0.0);
    for (int pass = 0; pass < 4; ++pass) {
        std::fill(t1.begin(), t1.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double v = t0[idx(i, j, k, l)];
                        if (v == 0.0) continue;
                        for (int a = 0; a < n; ++a) t1[idx(a, i, j, k)] += v * E(l, a);
                    }
        std::swap(t0, t1);
    }
    return CurvatureTensor(n, std::move(t0), E);
}

CurvatureTensor riemann_from_metric(const MetricField& g, const Point& p) {
    const int n = g.dim();
    Eigen::VectorXd steps(n);
    for (int d = 0; d < n; ++d) steps[d] = 1e-4 * g.domain().width(d);
    Point pp = p, pm = p;
    for (int d = 0; d < n; ++d) {
        pp[d] += steps[d];
        pm[d] -= steps[d];
    }
    if (!g.domain().contains(pp) || !g.domain().contains(pm))
        throw EvalError("riemann_from_metric: point too close to the domain boundary");
    return riemann_from_metric(g.sampler(), n, p, steps);
}

double sectional_curvature(const CurvatureTensor& R, const PlaneSection& pi, double ortho_tol) {
    double r1 = std::abs(pi.e1.squaredNorm() - 1.0);
    double r2 = std::abs(pi.e2.squaredNorm() - 1.0);
    double r12 = std::abs(pi.e1.dot(pi.e2));
    if (r1 > ortho_tol || r2 > ortho_tol || r12 > ortho_tol)
        throw EvalError("sectional_curvature: plane section is not orthonormal");
    return R.quad(pi.e1, pi.e2);
}

Eigen::MatrixXd ricci_form(const CurvatureTensor& R) {
    const int n = R.dim();
    Eigen::MatrixXd Q(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += R.at(i, j, j, l) + R.at(l, j, j, i);
            Q(i, l) = 0.5 * acc;
        }
    return Q;
}

double scalar_tau(const CurvatureTensor& R) {
    double acc = 0.0;
    for (int i = 0; i < R.dim(); ++i)
        for (int j = i + 1; j < R.dim(); ++j) acc += R.at(i, j, j, i);
    return acc;
}

}  // namespace dinv
