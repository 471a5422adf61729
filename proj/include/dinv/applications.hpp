#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dinv/delta.hpp"
#include "dinv/extrinsic.hpp"
#include "dinv/lagrangian.hpp"

namespace dinv {

/// Warped product N1 x_f N2 with metric g1 + f^2 g2, f > 0 on the base.
struct WarpedSpec {
    MetricField base;
    MetricField fiber;
    Expression warping;
    bool base_compact = false;
};

/// Geometer's sign: Delta f = -(1/sqrt(det g)) d_i (sqrt(det g) g^{ij} d_j f);
/// eigenvalues are positive (Delta cos = cos on a flat interval).
double laplacian_of_warping(const WarpedSpec& w, const Point& p);

struct WarpedCheckReport {
    double lhs = 0.0;  // (Delta f)/f
    double rhs = 0.0;  // (n1+n2)^2/(4 n2) H^2 + n1 max Ktilde
    double margin = 0.0;
    bool passed = false;
    double tol = 0.0;
};

WarpedCheckReport warped_inequality_check(const WarpedSpec& w, double H2, double maxKtilde,
                                          const Point& p, double tol = 1e-6);

struct WarpedFlags {
    bool harmonic = false;       // |Delta f| <= tol on the sample
    bool eigenfunction = false;  // Delta f / f constant and positive
    double lambda = 0.0;
    bool base_compact = false;
    std::vector<std::string> labels;  // fired non-existence conclusions
};

WarpedFlags warped_obstruction_flags(const WarpedSpec& w, const std::vector<Point>& sample,
                                     double tol = 1e-8);

enum class RecordKind { Immersion, Metric, Warped, PointData };

/// Catalog / spec-file entry: the geometric object plus asserted metadata
/// (closed-form lambda_1, volume, topology flags are never inferred).
struct ManifoldRecord {
    std::string name;
    RecordKind kind = RecordKind::Metric;
    std::optional<ImmersionField> immersion;
    std::optional<MetricField> metric;
    std::optional<WarpedSpec> warped;
    std::optional<CurvatureTensor> point_curvature;   // point-data kind
    std::vector<Eigen::MatrixXd> point_h;             // point-data kind, may be empty
    std::optional<double> lambda1;
    std::optional<double> volume;
    std::optional<bool> b1_zero;
    std::optional<bool> finite_pi1;
    bool homogeneous = false;
    std::optional<double> h2;          // known squared mean curvature (warped records)
    double ambient_c = 0.0;

    int dim() const;
};

struct SpectralReport {
    std::vector<std::pair<TupleSpec, double>> margins;  // lambda1 - n Delta(t)
    double nagano_margin = 0.0;                         // the k = 0 entry
    bool passed = false;
    double tol = 0.0;
};

/// lambda_1 >= n Delta(t) for every tuple (k=0 gives Nagano's bound).
SpectralReport spectral_bound_check(const ManifoldRecord& rec, const DeltaMap& results,
                                    double tol = 1e-6);

struct BestLivingReport {
    bool is_best = false;  // lambda_1 == n dhat0 within tol
    double lambda1 = 0.0;
    double n_dhat0 = 0.0;
    double gap = 0.0;
};

BestLivingReport best_living_test(const ManifoldRecord& rec, double dhat0, double tol = 1e-6);

struct AverageBoundReport {
    double lambda1 = 0.0;
    double mean_dhat0 = 0.0;   // volume-normalized quadrature mean
    double quad_volume = 0.0;  // quadrature of sqrt(det g), sanity value
    double margin = 0.0;       // lambda1 - n * mean_dhat0
    bool fires = false;        // strict inequality => no best way of living
};

/// Midpoint quadrature over the record's metric chart with sqrt(det g)
/// weights.
AverageBoundReport average_bound_test(const ManifoldRecord& rec, int grid_per_axis,
                                      const OptimizerOptions& opts = {});

struct ObstructionReport {
    bool delta_fires = false;  // some delta(t) > tol at some sample
    bool ricci_fires = false;  // max Ric > tol at some sample (classical test)
    double max_delta = 0.0;
    double max_ric = 0.0;
    TupleSpec delta_witness;
};

/// Scan for the minimal-immersion obstruction; a non-firing result only
/// means "not detected on this sample".
ObstructionReport minimal_obstruction(const std::vector<CurvatureTensor>& samples,
                                      const OptimizerOptions& opts = {}, double tol = 1e-8);

enum class ObstructionVerdict { Fires, NotFired, Inconclusive };

struct LagrangianObstructionReport {
    ObstructionVerdict verdict = ObstructionVerdict::Inconclusive;
    double max_delta = 0.0;
    std::vector<double> per_point_max_delta;
};

/// Fires iff (b1 = 0 or pi_1 finite) and some delta(t) > tol; missing
/// topology flags give an inconclusive verdict, not a pass.
LagrangianObstructionReport lagrangian_obstruction(const std::vector<CurvatureTensor>& samples,
                                                   std::optional<bool> b1_zero,
                                                   std::optional<bool> finite_pi1,
                                                   const OptimizerOptions& opts = {},
                                                   double tol = 1e-8);

}  // namespace dinv
