#include "dinv/delta.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dinv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian with a
/// deterministic sign fix on the R diagonal.
Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (R(j, j) < 0.0) Q.col(j) *= -1.0;
    return Q;
}

/// Minimizes sum_j tau(L_j) over the orthogonal group. The objective
/// restricted to an admissible Givens rotation (columns in different
/// blocks, or block against trailing) is c0 + P cos 2t + S sin 2t, so each
/// coordinate step takes its exact minimizer.
class FrameObjective {
public:
    FrameObjective(const CurvatureTensor& R, const TupleSpec& t)
        : R_(R), n_(R.dim()), group_(n_, -1) {
        int off = 0;
        for (size_t j = 0; j < t.parts.size(); ++j) {
            blocks_.push_back({off, off + t.parts[j]});
            for (int c = off; c < off + t.parts[j]; ++c) group_[c] = static_cast<int>(j);
            off += t.parts[j];
        }
    }

    void set_frame(const Eigen::MatrixXd& Q) {
        Q_ = Q;
        W_.resize(n_);
        for (int c = 0; c < n_; ++c) W_[c] = quad_form(Q_.col(c));
    }

    const Eigen::MatrixXd& frame() const { return Q_; }

    double objective() const {
        double acc = 0.0;
        for (const auto& [b0, b1] : blocks_)
            for (int a = b0; a < b1; ++a)
                for (int b = a + 1; b < b1; ++b) acc += Q_.col(a).dot(W_[b] * Q_.col(a));
        return acc;
    }

    /// One full pass over admissible Givens pairs; returns the objective
    /// decrease (>= 0).
    double sweep() {
        double total = 0.0;
        for (int p = 0; p < n_; ++p)
            for (int q = p + 1; q < n_; ++q) {
                int gp = group_[p], gq = group_[q];
                if (gp == gq) continue;  // same block or both trailing: objective is invariant
                total += givens_step(p, q);
            }
        return total;
    }

private:
    const CurvatureTensor& R_;
    int n_;
    std::vector<std::pair<int, int>> blocks_;
    std::vector<int> group_;
    Eigen::MatrixXd Q_;
    std::vector<Eigen::MatrixXd> W_;  // W_[c]: u^T W_[c] u = R(u, q_c; q_c, u)

    Eigen::MatrixXd quad_form(const Eigen::VectorXd& v) const {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n_, n_);
        for (int j = 0; j < n_; ++j) {
            if (v[j] == 0.0) continue;
            for (int k = 0; k < n_; ++k) {
                double vv = v[j] * v[k];
                if (vv == 0.0) continue;
                for (int i = 0; i < n_; ++i)
                    for (int l = 0; l < n_; ++l) W(i, l) += R_.at(i, j, k, l) * vv;
            }
        }
        return 0.5 * (W + W.transpose());
    }

    double givens_step(int p, int q) {
        const int gp = group_[p], gq = group_[q];
        double ca = 0.0, cb = 0.0, cx = 0.0;
        const Eigen::VectorXd qp = Q_.col(p), qq = Q_.col(q);
        if (gp >= 0) {
            const auto& [b0, b1] = blocks_[gp];
            for (int c = b0; c < b1; ++c) {
                if (c == p) continue;
                ca += qp.dot(W_[c] * qp);
                cb += qq.dot(W_[c] * qq);
                cx += 2.0 * qp.dot(W_[c] * qq);
            }
        }
        if (gq >= 0) {
            const auto& [b0, b1] = blocks_[gq];
            for (int c = b0; c < b1; ++c) {
                if (c == q) continue;
                ca += qq.dot(W_[c] * qq);
                cb += qp.dot(W_[c] * qp);
                cx -= 2.0 * qp.dot(W_[c] * qq);
            }
        }
        const double P = 0.5 * (ca - cb);
        const double S = 0.5 * cx;
        const double amp = std::hypot(P, S);
        const double decrease = amp + P;  // F(0) - min_t F(t)
        if (!(decrease > 1e-15 * (1.0 + amp))) return 0.0;

        const double theta = 0.5 * std::atan2(-S, -P);
        const double c = std::cos(theta), s = std::sin(theta);
        Q_.col(p) = c * qp + s * qq;
        Q_.col(q) = -s * qp + c * qq;
        W_[p] = quad_form(Q_.col(p));
        W_[q] = quad_form(Q_.col(q));
        return decrease;
    }
};

struct RestartOutcome {
    double value;
    Eigen::MatrixXd frame;
    bool converged;
};

RestartOutcome run_descent(FrameObjective& obj, const Eigen::MatrixXd& seed,
                           const OptimizerOptions& opts) {
    obj.set_frame(seed);
    bool converged = false;
    double scale = 1.0 + std::abs(obj.objective());
    for (int it = 0; it < opts.max_iters; ++it) {
        double dec = obj.sweep();
        if (dec < opts.tol * scale) {
            converged = true;
            break;
        }
    }
    return {obj.objective(), obj.frame(), converged};
}

}  // namespace

std::pair<int, int> SubspaceTuple::block_range(int j) const {
    int off = 0;
    for (int i = 0; i < j; ++i) off += tuple.parts[i];
    return {off, off + tuple.parts[j]};
}

double tau_of_subspace(const CurvatureTensor& R, const std::vector<Eigen::VectorXd>& basis,
                       double ortho_tol) {
    if (basis.size() < 2) throw std::invalid_argument("tau_of_subspace: need dim >= 2");
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = a; b < basis.size(); ++b) {
            double want = (a == b) ? 1.0 : 0.0;
            if (std::abs(basis[a].dot(basis[b]) - want) > ortho_tol)
                throw std::invalid_argument("tau_of_subspace: basis is not orthonormal");
        }
    double acc = 0.0;
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = a + 1; b < basis.size(); ++b) acc += R.quad(basis[a], basis[b]);
    return acc;
}

double normalizing_coefficient(int n, const TupleSpec& t) {
    TupleSpec check{n, t.parts};
    if (!check.valid()) throw std::invalid_argument("normalizing_coefficient: tuple not in S(n)");
    const double k = static_cast<double>(t.k());
    const double sum = static_cast<double>(t.sum());
    return n * n * (n + k - 1.0 - sum) / (2.0 * (n + k - sum));
}

DeltaResult delta_invariant(const CurvatureTensor& R, const TupleSpec& t,
                            const OptimizerOptions& opts) {
    const int n = R.dim();
    TupleSpec tt{n, t.parts};
    if (!tt.valid()) throw std::invalid_argument("delta_invariant: tuple not in S(n)");

    DeltaResult res;
    res.tau = scalar_tau(R);
    res.coeff_c = normalizing_coefficient(n, tt);
    res.minimizer.tuple = tt;

    double cc_value;
    const bool const_curv = R.constant_curvature_fit(cc_value) < 1e-9;

    if (tt.empty()) {
        res.inf_sum = 0.0;
        res.delta = res.tau;
        res.normalized = res.delta / res.coeff_c;
        res.minimizer.frame = Eigen::MatrixXd::Identity(n, n);
        res.certified = true;
        return res;
    }

    FrameObjective obj(R, tt);
    double best = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_frame;
    bool best_converged = false;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ric(ricci_form(R));
    const int restarts = std::max(1, opts.restarts);
    for (int r = 0; r < restarts; ++r) {
        Eigen::MatrixXd seed;
        if (r == 0) {
            seed = Eigen::MatrixXd::Identity(n, n);
        } else if (r == 1) {
            seed = ric.eigenvectors();  // ascending eigenvalues: max-Ricci direction trails
        } else {
            seed = random_orthogonal(n, splitmix64(opts.seed ^ (0x100ull + r)));
        }
        RestartOutcome out = run_descent(obj, seed, opts);
        if (out.value < best) {
            best = out.value;
            best_frame = out.frame;
            best_converged = out.converged;
        }
    }

    res.inf_sum = best;
    res.delta = res.tau - res.inf_sum;
    res.normalized = res.delta / res.coeff_c;
    res.minimizer.frame = best_frame;
    res.restarts_used = restarts;
    res.converged = best_converged;
    res.certified = const_curv || (tt.k() == 1 && tt.parts[0] == n - 1);
    if (!best_converged && !const_curv) res.certified = false;
    return res;
}

DeltaMap delta_all(const CurvatureTensor& R, const OptimizerOptions& opts) {
    DeltaMap out;
    for (const TupleSpec& t : enumerate_tuples(R.dim())) out.emplace(t, delta_invariant(R, t, opts));
    return out;
}

std::pair<double, TupleSpec> delta_hat0(const DeltaMap& results, int n) {
    if (results.empty()) throw std::invalid_argument("delta_hat0: empty result map");
    double best = -std::numeric_limits<double>::infinity();
    TupleSpec arg;
    // map iteration follows enumeration order (k, then lex); strict '>'
    // keeps the first maximizer, which is the required tie-break
    for (const auto& [t, r] : results) {
        if (r.normalized > best) {
            best = r.normalized;
            arg = t;
        }
    }
    (void)n;
    return {best, arg};
}

std::pair<double, TupleSpec> delta_hat0(const CurvatureTensor& R, const OptimizerOptions& opts) {
    if (R.dim() > opts.dhat0_dim_cap)
        throw std::invalid_argument("delta_hat0: dimension exceeds the enumeration cap");
    return delta_hat0(delta_all(R, opts), R.dim());
}

MaxPrincipleReport maximum_principle_check(const DeltaMap& results, const TupleSpec& t_equal,
                                           double tol) {
    auto it = results.find(t_equal);
    if (it == results.end())
        throw std::invalid_argument("maximum_principle_check: t_equal missing from results");
    const int n = t_equal.n;
    for (const TupleSpec& t : enumerate_tuples(n))
        if (!results.count(t))
            throw std::invalid_argument("maximum_principle_check: result map does not cover S(n)");

    MaxPrincipleReport rep;
    rep.tol = tol;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    const double base = it->second.normalized;
    for (const auto& [t, r] : results) {
        double v = r.normalized - base;
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst = t;
        }
    }
    rep.passed = rep.max_violation <= tol;
    return rep;
}

}  // namespace dinv
