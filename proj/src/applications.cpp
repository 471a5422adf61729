#include "dinv/applications.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dinv {

double laplacian_of_warping(const WarpedSpec& w, const Point& p) {
    const int n = w.base.dim();
    if (!w.base.domain().contains(p))
        throw EvalError("laplacian_of_warping: point outside the base domain");
    MetricJet mj = w.base.jet(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mj.g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw EvalError("laplacian_of_warping: singular base metric");
    Eigen::MatrixXd ginv = mj.g.inverse();

    Jet2 fj = w.warping.eval_jet2(p, w.base.params());

    // Delta f = -[ g^{ij} f_ij + (d_i g^{ij}) f_j + (1/2) g^{ij} (d_i ln det g) f_j ]
    double t1 = (ginv * fj.hess).trace();
    double t2 = 0.0, t3 = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd dginv = -ginv * mj.dg[i] * ginv;
        t2 += dginv.row(i).dot(fj.grad);
        double dlndet = (ginv * mj.dg[i]).trace();
        t3 += 0.5 * dlndet * ginv.row(i).dot(fj.grad);
    }
    return -(t1 + t2 + t3);
}

WarpedCheckReport warped_inequality_check(const WarpedSpec& w, double H2, double maxKtilde,
                                          const Point& p, double tol) {
    double f = w.warping.eval(p, w.base.params());
    if (f <= 0.0) throw EvalError("warped_inequality_check: warping function not positive");
    const double n1 = w.base.dim(), n2 = w.fiber.dim();
    WarpedCheckReport rep;
    rep.lhs = laplacian_of_warping(w, p) / f;
    rep.rhs = (n1 + n2) * (n1 + n2) / (4.0 * n2) * H2 + n1 * maxKtilde;
    rep.margin = rep.rhs - rep.lhs;
    rep.tol = tol;
    rep.passed = rep.margin >= -tol;
    return rep;
}

WarpedFlags warped_obstruction_flags(const WarpedSpec& w, const std::vector<Point>& sample,
                                     double tol) {
    WarpedFlags flags;
    flags.base_compact = w.base_compact;
    if (sample.empty()) return flags;

    double max_abs = 0.0;
    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = -std::numeric_limits<double>::infinity();
    for (const Point& p : sample) {
        double lf = laplacian_of_warping(w, p);
        double f = w.warping.eval(p, w.base.params());
        max_abs = std::max(max_abs, std::abs(lf));
        double ratio = lf / f;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    flags.harmonic = max_abs <= tol;
    if (!flags.harmonic && ratio_max - ratio_min <= tol * (1.0 + std::abs(ratio_max)) &&
        ratio_min > tol) {
        flags.eigenfunction = true;
        flags.lambda = 0.5 * (ratio_min + ratio_max);
    }
    if (flags.harmonic) {
        flags.labels.push_back("no minimal immersion into negative sectional curvature");
        flags.labels.push_back("minimal immersions into Euclidean space are warped-product immersions");
    }
    if (flags.eigenfunction)
        flags.labels.push_back("no minimal immersion into non-positive sectional curvature");
    if (flags.base_compact) {
        flags.labels.push_back("compact base: no minimal immersion into negative sectional curvature");
        flags.labels.push_back("compact base: no minimal immersion into any Euclidean space");
    }
    return flags;
}

int ManifoldRecord::dim() const {
    switch (kind) {
        case RecordKind::Immersion: return immersion ? immersion->dim() : 0;
        case RecordKind::Metric: return metric ? metric->dim() : 0;
        case RecordKind::Warped: return warped ? warped->base.dim() + warped->fiber.dim() : 0;
        case RecordKind::PointData: return point_curvature ? point_curvature->dim() : 0;
    }
    return 0;
}

SpectralReport spectral_bound_check(const ManifoldRecord& rec, const DeltaMap& results,
                                    double tol) {
    if (!rec.lambda1) throw std::invalid_argument("spectral_bound_check: record has no lambda1");
    const int n = rec.dim();
    SpectralReport rep;
    rep.tol = tol;
    rep.passed = true;
    for (const auto& [t, r] : results) {
        double margin = *rec.lambda1 - n * r.normalized;
        rep.margins.emplace_back(t, margin);
        if (t.empty()) rep.nagano_margin = margin;
        if (margin < -tol) rep.passed = false;
    }
    return rep;
}

BestLivingReport best_living_test(const ManifoldRecord& rec, double dhat0, double tol) {
    if (!rec.lambda1) throw std::invalid_argument("best_living_test: record has no lambda1");
    BestLivingReport rep;
    rep.lambda1 = *rec.lambda1;
    rep.n_dhat0 = rec.dim() * dhat0;
    rep.gap = std::abs(rep.lambda1 - rep.n_dhat0);
    rep.is_best = rep.gap <= tol;
    return rep;
}

AverageBoundReport average_bound_test(const ManifoldRecord& rec, int grid_per_axis,
                                      const OptimizerOptions& opts) {
    if (!rec.lambda1 || !rec.volume)
        throw std::invalid_argument("average_bound_test: record needs lambda1 and volume");
    if (!rec.metric) throw std::invalid_argument("average_bound_test: record needs a metric chart");
    const MetricField& g = *rec.metric;
    const int n = g.dim();

    // midpoint rule over the full box keeps samples interior for the FD stencil
    double cell = 1.0;
    for (int d = 0; d < n; ++d) cell *= g.domain().width(d) / grid_per_axis;

    std::vector<int> ix(n, 0);
    double integral = 0.0, volume = 0.0;
    for (;;) {
        Point p(n);
        for (int d = 0; d < n; ++d)
            p[d] = g.domain().axes[d][0] + (ix[d] + 0.5) * g.domain().width(d) / grid_per_axis;
        double w = std::sqrt(g.evaluate(p).determinant()) * cell;
        CurvatureTensor R = riemann_from_metric(g, p);
        auto [dhat, arg] = delta_hat0(R, opts);
        integral += dhat * w;
        volume += w;

        int d = 0;
        while (d < n && ++ix[d] == grid_per_axis) ix[d++] = 0;
        if (d == n) break;
    }

    AverageBoundReport rep;
    rep.lambda1 = *rec.lambda1;
    rep.quad_volume = volume;
    rep.mean_dhat0 = integral / *rec.volume;
    rep.margin = rep.lambda1 - n * rep.mean_dhat0;
    rep.fires = rep.margin > 1e-9;
    return rep;
}

ObstructionReport minimal_obstruction(const std::vector<CurvatureTensor>& samples,
                                      const OptimizerOptions& opts, double tol) {
    ObstructionReport rep;
    rep.max_delta = -std::numeric_limits<double>::infinity();
    rep.max_ric = -std::numeric_limits<double>::infinity();
    for (const CurvatureTensor& R : samples) {
        for (const auto& [t, r] : delta_all(R, opts)) {
            if (r.delta > rep.max_delta) {
                rep.max_delta = r.delta;
                rep.delta_witness = t;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ricci_form(R), Eigen::EigenvaluesOnly);
        rep.max_ric = std::max(rep.max_ric, es.eigenvalues().maxCoeff());
    }
    rep.delta_fires = rep.max_delta > tol;
    rep.ricci_fires = rep.max_ric > tol;
    return rep;
}

LagrangianObstructionReport lagrangian_obstruction(const std::vector<CurvatureTensor>& samples,
                                                   std::optional<bool> b1_zero,
                                                   std::optional<bool> finite_pi1,
                                                   const OptimizerOptions& opts, double tol) {
    LagrangianObstructionReport rep;
    rep.max_delta = -std::numeric_limits<double>::infinity();
    for (const CurvatureTensor& R : samples) {
        double point_max = -std::numeric_limits<double>::infinity();
        for (const auto& [t, r] : delta_all(R, opts)) point_max = std::max(point_max, r.delta);
        rep.per_point_max_delta.push_back(point_max);
        rep.max_delta = std::max(rep.max_delta, point_max);
    }
    if (!b1_zero.has_value() && !finite_pi1.has_value()) {
        rep.verdict = ObstructionVerdict::Inconclusive;
        return rep;
    }
    const bool hypothesis = (b1_zero && *b1_zero) || (finite_pi1 && *finite_pi1);
    rep.verdict = (hypothesis && rep.max_delta > tol) ? ObstructionVerdict::Fires
                                                      : ObstructionVerdict::NotFired;
    return rep;
}

}  // namespace dinv
