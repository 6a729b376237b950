#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ssel/core.hpp"
#include "ssel/evolution.hpp"

namespace ssel {

struct BaselineConfig {
    std::optional<double> pelt_penalty;  ///< unset: 2 * D * log(T)
    std::size_t kernel_max_pairs = 2000;
    double bocpd_hazard_lambda = 200.0;
    double bocpd_mu0 = 0.0;
    double bocpd_kappa0 = 1.0;
    double bocpd_alpha0 = 1.0;
    double bocpd_beta0 = 1.0;
    double bocpd_prune = 1e-8;

    void validate() const;
};

// ---------------------------------------------------------------- PELT / L2

/// Within-segment sum of squared deviations from the segment mean, O(D)
/// per query via per-column prefix sums.
class L2Cost {
public:
    explicit L2Cost(const Matrix& x);
    /// Cost of samples [s, t).
    double operator()(std::size_t s, std::size_t t) const;
    std::size_t length() const { return T_; }

private:
    std::size_t T_;
    std::size_t D_;
    std::vector<double> sum_;  // (T+1) x D
    std::vector<double> sq_;   // (T+1) x D
};

struct PenalizedSegmentation {
    std::vector<int> changepoints;  ///< sorted, strictly inside (0, T)
    double cost = 0.0;              ///< segment costs + penalty * #changepoints
};

/// Exact PELT with pruning. Every segment has at least min_size samples.
PenalizedSegmentation pelt_search(const L2Cost& cost, double penalty, int min_size);

double default_pelt_penalty(std::size_t dim, std::size_t T);

/// Matches detected points to the B evenly spaced slots q*T/(B+1) with an
/// order-preserving minimum total distance assignment; slots left without a
/// point keep the slot position. The result is not yet repaired.
Boundaries assign_to_slots(std::span<const int> detected, std::size_t T, int num_boundaries);

Boundaries pelt_l2(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg);

// ---------------------------------------------------------------- kernel CPD

/// RBF Gram matrix exp(-|x_s - x_t|^2 / (2 sigma^2)).
Matrix rbf_gram(const Matrix& x, double sigma, Exec exec = Exec::parallel);

/// Median pairwise Euclidean distance over all pairs, or over max_pairs
/// pairs drawn with a fixed seed when there are more.
double median_pairwise_distance(const Matrix& x, std::size_t max_pairs);

/// Within-segment kernel cost sum K(x_t,x_t) - (1/n) sum K(x_s,x_t), O(1)
/// per query via 2-D prefix sums of the Gram matrix.
class KernelCost {
public:
    explicit KernelCost(const Matrix& gram);
    double operator()(std::size_t s, std::size_t t) const;
    std::size_t length() const { return T_; }

private:
    std::size_t T_;
    std::vector<double> diag_;  // T+1
    std::vector<double> box_;   // (T+1) x (T+1)
};

struct FixedSegmentation {
    Boundaries boundaries;
    double cost = 0.0;
};

/// Exact dynamic program for exactly n_bkps changepoints with minimum
/// segment length. Ties resolve to the earliest boundary.
FixedSegmentation kernel_dp(const KernelCost& cost, int n_bkps, int min_size);

Boundaries kernel_cpd_rbf(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg);

// ---------------------------------------------------------------- PCA(1) / BOCPD

struct Pca1Projection {
    std::vector<double> u1;
    std::vector<double> mean;
    std::vector<double> z;
    int iterations = 0;
    bool fallback = false;  ///< zero covariance, u1 = e_0
};

/// Leading principal direction by power iteration on the covariance. The
/// largest-magnitude component of u1 is made positive.
Pca1Projection pca1(const Matrix& x);

struct RunLengthPosterior {
    std::vector<std::vector<double>> rows;  ///< rows[t] after t+1 observations, entries r = 0..t+1
    std::vector<double> neg_log_pred;       ///< -log p(z_t | z_<t)
    std::vector<int> map_run_length;        ///< argmax of rows[t]
};

/// Normal-inverse-gamma BOCPD with constant hazard 1/lambda.
RunLengthPosterior bocpd_run_length(std::span<const double> z, const BaselineConfig& bcfg);

/// Start indices of new runs where the MAP run length drops by more than
/// half, each scored by the surprise of its first observation.
struct ScoredPoint {
    int position;
    double score;
};
std::vector<ScoredPoint> bocpd_candidates(const RunLengthPosterior& posterior);

Boundaries bocpd_pca1(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg);

Boundaries run_baseline(Method method, const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg);

}  // namespace ssel
