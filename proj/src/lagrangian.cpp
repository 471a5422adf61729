#include "dinv/lagrangian.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dinv {

Eigen::MatrixXd complex_structure(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return J;
}

double lagrangian_check(const ImmersionField& f, const Point& p) {
    if (f.ambient_dim() % 2 != 0)
        throw std::invalid_argument("lagrangian_check: ambient dimension must be even");
    SecondFundamentalForm sff = second_fundamental_form(f, p);
    const Eigen::MatrixXd J = complex_structure(f.ambient_dim() / 2);
    Eigen::MatrixXd omega = (J * sff.ambient_tangent).transpose() * sff.ambient_tangent;
    return omega.cwiseAbs().maxCoeff();
}

ImmersionField whitney_immersion(int n) {
    if (n < 2) throw std::invalid_argument("whitney_immersion: n must be >= 2");
    std::vector<std::string> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = "x" + std::to_string(i + 1);
    std::string s = "(";
    for (int i = 0; i < n; ++i) {
        if (i) s += "+";
        s += vars[i] + "*" + vars[i];
    }
    s += ")";
    // inverse stereographic chart: y0 = (s-1)/(s+1), y_j = 2 x_j / (s+1);
    // w_j = (1 + i y0) y_j / (1 + y0^2) simplifies to the rational forms below
    std::vector<Expression> comps;
    comps.reserve(2 * n);
    for (int j = 0; j < n; ++j)  // Re w_j = x_j (1+s) / (1+s^2)
        comps.push_back(
            parse_expression(vars[j] + "*(1+" + s + ")/(1+" + s + "*" + s + ")", vars));
    for (int j = 0; j < n; ++j)  // Im w_j = x_j (s-1) / (1+s^2)
        comps.push_back(
            parse_expression(vars[j] + "*(" + s + "-1)/(1+" + s + "*" + s + ")", vars));
    Box box;
    box.axes.assign(n, {-1.6, 1.6});
    return ImmersionField(n, 2 * n, std::move(comps), box);
}

double lagrangian_coefficient(int n, const TupleSpec& t, LagrangianCase which) {
    TupleSpec check{n, t.parts};
    if (!check.valid()) throw std::invalid_argument("lagrangian_coefficient: tuple not in S(n)");
    const double k = static_cast<double>(t.k());
    const double sum = static_cast<double>(t.sum());
    switch (which) {
        case LagrangianCase::L1:
            return normalizing_coefficient(n, t);
        case LagrangianCase::L2: {
            if (t.sum() >= n)
                throw std::invalid_argument("lagrangian_coefficient: L2 requires sum n_i < n");
            double inv = 0.0;
            for (int p : t.parts) inv += 1.0 / (2.0 + p);
            double num = n - sum + 3.0 * k - 1.0 - 6.0 * inv;
            double den = n - sum + 3.0 * k + 2.0 - 6.0 * inv;
            return n * n * num / (2.0 * den);
        }
        case LagrangianCase::L3: {
            if (t.sum() != n)
                throw std::invalid_argument("lagrangian_coefficient: L3 requires sum n_i = n");
            double inv = 0.0;  // skips i=1 (parts are sorted, n_1 minimal)
            for (size_t i = 1; i < t.parts.size(); ++i) inv += 1.0 / (2.0 + t.parts[i]);
            double num = k - 1.0 - 2.0 * inv;
            double den = k - 2.0 * inv;
            return n * n * num / (2.0 * den);
        }
    }
    throw std::invalid_argument("lagrangian_coefficient: unknown case");
}

CheckReport lagrangian_inequality_check(const DeltaResult& d, double H2, const TupleSpec& t,
                                        double ambient_c, LagrangianCase which, double tol) {
    if (!(d.minimizer.tuple == t))
        throw std::invalid_argument("lagrangian_inequality_check: tuple/result mismatch");
    const int n = t.n;
    double sum_nj = 0.0;
    for (int p : t.parts) sum_nj += p * (p - 1.0);
    CheckReport rep;
    rep.check = which == LagrangianCase::L1 ? "lagrangian.L1"
                : which == LagrangianCase::L2 ? "lagrangian.L2"
                                              : "lagrangian.L3";
    rep.lhs = d.delta;
    rep.rhs = lagrangian_coefficient(n, t, which) * H2 +
              0.5 * (n * (n - 1.0) - sum_nj) * ambient_c;
    rep.margin = rep.rhs - rep.lhs;
    rep.tol = tol;
    rep.passed = rep.margin >= -tol;
    return rep;
}

LagrangianData LagrangianData::from_cubic(std::vector<Eigen::MatrixXd> cubic) {
    LagrangianData data;
    const int n = static_cast<int>(cubic.size());
    data.cubic = std::move(cubic);
    data.sff.tangent_frame = Eigen::MatrixXd::Identity(n, n);
    data.sff.h = data.cubic;
    double sym = 0.0;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                sym = std::max(sym, std::abs(data.cubic[c](i, j) - data.cubic[c](j, i)));
                sym = std::max(sym, std::abs(data.cubic[c](i, j) - data.cubic[i](c, j)));
            }
    data.cubic_symmetry_residual = sym;
    return data;
}

LagrangianData lagrangian_data(const ImmersionField& f, const Point& p) {
    if (f.ambient_dim() != 2 * f.dim())
        throw std::invalid_argument("lagrangian_data: need ambient dimension 2n");
    const int n = f.dim();
    LagrangianData data;
    data.sff = second_fundamental_form(f, p);
    const Eigen::MatrixXd J = complex_structure(n);
    const Eigen::MatrixXd JT = J * data.sff.ambient_tangent;  // J-adapted normal frame

    Eigen::MatrixXd omega = JT.transpose() * data.sff.ambient_tangent;
    data.symplectic_residual = omega.cwiseAbs().maxCoeff();
    if (data.symplectic_residual > 1e-8)
        throw EvalError("lagrangian_data: point is not Lagrangian (symplectic residual too large)");

    // express h against J e_c: C[c](i,j) = sum_r h^r_ij <nu_r, J e_c>
    Eigen::MatrixXd overlap = data.sff.normal_frame.transpose() * JT;  // (m-n) x n
    data.cubic.assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            if (overlap(r, c) != 0.0) data.cubic[c] += overlap(r, c) * data.sff.h[r];

    double sym = 0.0;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                sym = std::max(sym, std::abs(data.cubic[c](i, j) - data.cubic[i](c, j)));
    data.cubic_symmetry_residual = sym;
    return data;
}

MinimalityReport minimality_flags(const std::vector<std::pair<double, double>>& delta_h2, int n,
                                  const TupleSpec& t, double ambient_c, double eps_eq,
                                  double eps_H) {
    double coeff = lagrangian_coefficient(n, t, LagrangianCase::L1);
    double sum_nj = 0.0;
    for (int p : t.parts) sum_nj += p * (p - 1.0);
    const double cterm = 0.5 * (n * (n - 1.0) - sum_nj) * ambient_c;

    MinimalityReport rep;
    rep.eps_eq = eps_eq;
    rep.eps_H = eps_H;
    for (size_t i = 0; i < delta_h2.size(); ++i) {
        auto [delta, H2] = delta_h2[i];
        double residual = std::abs(coeff * H2 + cterm - delta);
        if (residual < eps_eq && H2 > eps_H) {
            MinimalityFlag flag;
            flag.p = Eigen::VectorXd::Constant(1, static_cast<double>(i));
            flag.equality_residual = residual;
            flag.H2 = H2;
            rep.flagged.push_back(std::move(flag));
        }
    }
    rep.passed = rep.flagged.empty();
    return rep;
}

MinimalityReport minimality_at_equality_check(const ImmersionField& f,
                                              const std::vector<Point>& points, const TupleSpec& t,
                                              double ambient_c, const OptimizerOptions& opts,
                                              double eps_eq, double eps_H) {
    std::vector<std::pair<double, double>> data;
    data.reserve(points.size());
    for (const Point& p : points) {
        SecondFundamentalForm sff = second_fundamental_form(f, p);
        CurvatureTensor R = curvature_via_gauss(sff, ambient_c);
        DeltaResult d = delta_invariant(R, t, opts);
        data.emplace_back(d.delta, mean_curvature(sff).H2);
    }
    MinimalityReport rep = minimality_flags(data, f.dim(), t, ambient_c, eps_eq, eps_H);
    for (size_t i = 0; i < rep.flagged.size(); ++i) {
        size_t pi = static_cast<size_t>(rep.flagged[i].p[0]);
        rep.flagged[i].p = points[pi];
    }
    return rep;
}

namespace {

/// cubic transformed to the frame s: C'_abc = C_ijk Q_ia Q_jb Q_kc.
std::vector<Eigen::MatrixXd> rotate_cubic(const std::vector<Eigen::MatrixXd>& C,
                                          const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(C.size());
    std::vector<Eigen::MatrixXd> mid(n), out(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k) mid[k] = Q.transpose() * C[k] * Q;
    for (int c = 0; c < n; ++c)
        for (int k = 0; k < n; ++k) out[c] += Q(k, c) * mid[k];
    return out;
}

}  // namespace

L2EqualityReport equality_form_check_L2(const LagrangianData& data, const SubspaceTuple& s,
                                        const TupleSpec& t, double tol) {
    const int n = data.dim();
    const int mu = t.sum();
    if (mu >= n) throw std::invalid_argument("equality_form_check_L2: requires sum n_i < n");
    if (!(s.tuple == t)) throw std::invalid_argument("equality_form_check_L2: frame mismatch");

    std::vector<Eigen::MatrixXd> C = rotate_cubic(data.cubic, s.frame);

    std::vector<int> group(n, -1);
    {
        int off = 0;
        for (int j = 0; j < t.k(); ++j) {
            for (int c = off; c < off + t.parts[j]; ++c) group[c] = j;
            off += t.parts[j];
        }
    }

    L2EqualityReport best;
    best.residual = std::numeric_limits<double>::infinity();
    best.tol = tol;
    // the distinguished direction is fixed only up to relabeling of the
    // trailing vectors; try each candidate and keep the best residual
    for (int d = mu; d < n; ++d) {
        const double lambda = C[d](d, d) / 3.0;
        double res = 0.0;
        auto expect = [&](int i, int j, int c, double want) {
            res = std::max(res, std::abs(C[c](i, j) - want));
        };
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int c = 0; c < n; ++c) {
                    const int gi = group[i], gj = group[j], gc = group[c];
                    const bool iu = gi < 0 && i != d, ju = gj < 0 && j != d, cu = gc < 0 && c != d;
                    if (gi >= 0 && gj >= 0) {
                        if (gi == gj) {
                            if (gc == gi) continue;  // free in-block components
                            if (c == d)
                                expect(i, j, c, (i == j) ? 3.0 * lambda / (2.0 + t.parts[gi]) : 0.0);
                            else
                                expect(i, j, c, 0.0);
                        } else {
                            expect(i, j, c, 0.0);  // cross-block pair, all components vanish
                        }
                    } else if (gi >= 0 && j == d) {
                        expect(i, j, c, (c == i) ? 3.0 * lambda / (2.0 + t.parts[gi]) : 0.0);
                    } else if (gi >= 0 && ju) {
                        expect(i, j, c, 0.0);
                    } else if (i == d && j == d) {
                        expect(i, j, c, (c == d) ? 3.0 * lambda : 0.0);
                    } else if (i == d && ju) {
                        expect(i, j, c, (c == j) ? lambda : 0.0);
                    } else if (iu && j == d) {
                        expect(i, j, c, (c == i) ? lambda : 0.0);
                    } else if (iu && ju) {
                        expect(i, j, c, (i == j && c == d) ? lambda : 0.0);
                    }
                }
        // in-block traceless part: sum_alpha C(alpha,alpha,gamma) = 0
        for (int j = 0; j < t.k(); ++j) {
            auto [b0, b1] = s.block_range(j);
            for (int g = b0; g < b1; ++g) {
                double trace = 0.0;
                for (int a = b0; a < b1; ++a) trace += C[g](a, a);
                res = std::max(res, std::abs(trace));
            }
        }
        if (res < best.residual) {
            best.residual = res;
            best.mu_index = d;
            best.lambda = lambda;
        }
    }
    best.passed = best.residual <= tol;
    return best;
}

L3EqualityReport equality_conditions_check_L3(const LagrangianData& data, const SubspaceTuple& s,
                                              const TupleSpec& t, double tol) {
    const int n = data.dim();
    if (t.sum() != n)
        throw std::invalid_argument("equality_conditions_check_L3: tuple must partition n");
    if (!(s.tuple == t)) throw std::invalid_argument("equality_conditions_check_L3: frame mismatch");

    std::vector<Eigen::MatrixXd> C = rotate_cubic(data.cubic, s.frame);
    const int k = t.k();
    const int nmin = t.parts[0];

    L3EqualityReport rep;
    rep.tol = tol;
    std::vector<std::pair<int, int>> ranges(k);
    for (int j = 0; j < k; ++j) ranges[j] = s.block_range(j);
    std::vector<int> group(n, -1);
    for (int j = 0; j < k; ++j)
        for (int c = ranges[j].first; c < ranges[j].second; ++c) group[c] = j;

    // (a) cross-block pairs have no components outside the pair itself
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (group[i] == group[j]) continue;
            for (int A = 0; A < n; ++A)
                if (A != i && A != j) rep.res_a = std::max(rep.res_a, std::abs(C[A](i, j)));
        }

    for (int j = 0; j < k; ++j) {
        auto [b0, b1] = ranges[j];
        for (int beta = b0; beta < b1; ++beta) {
            double block_trace = 0.0;
            for (int a = b0; a < b1; ++a) block_trace += C[beta](a, a);
            if (t.parts[j] != nmin) {
                // (b): diagonal entries from other blocks vanish, block trace vanishes
                rep.res_b = std::max(rep.res_b, std::abs(block_trace));
                for (int i2 = 0; i2 < k; ++i2) {
                    if (i2 == j) continue;
                    for (int a = ranges[i2].first; a < ranges[i2].second; ++a)
                        rep.res_b = std::max(rep.res_b, std::abs(C[beta](a, a)));
                }
            } else {
                // (c): block trace ties the diagonal entries of every other block
                for (int i2 = 0; i2 < k; ++i2) {
                    if (i2 == j) continue;
                    for (int a = ranges[i2].first; a < ranges[i2].second; ++a)
                        rep.res_c = std::max(
                            rep.res_c,
                            std::abs(block_trace - (t.parts[i2] + 2.0) * C[beta](a, a)));
                }
            }
        }
    }
    rep.passed = rep.res_a <= tol && rep.res_b <= tol && rep.res_c <= tol;
    return rep;
}

}  // namespace dinv
