#include "ssel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ssel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void BaselineConfig::validate() const {
    if (pelt_penalty && !(*pelt_penalty >= 0.0)) throw std::invalid_argument("pelt_penalty must be >= 0");
    if (kernel_max_pairs < 1) throw std::invalid_argument("kernel_max_pairs must be >= 1");
    if (!(bocpd_hazard_lambda > 1.0)) throw std::invalid_argument("bocpd_hazard_lambda must be > 1");
    if (!(bocpd_kappa0 > 0.0) || !(bocpd_alpha0 > 0.0) || !(bocpd_beta0 > 0.0)) {
        throw std::invalid_argument("bocpd prior kappa0, alpha0, beta0 must be > 0");
    }
    if (bocpd_prune < 0.0 || bocpd_prune >= 1.0) throw std::invalid_argument("bocpd_prune must lie in [0, 1)");
}

// ---------------------------------------------------------------- PELT / L2

L2Cost::L2Cost(const Matrix& x) : T_(x.rows()), D_(x.cols()), sum_((x.rows() + 1) * x.cols(), 0.0), sq_(sum_.size(), 0.0) {
    for (std::size_t t = 0; t < T_; ++t) {
        for (std::size_t d = 0; d < D_; ++d) {
            const double v = x(t, d);
            sum_[(t + 1) * D_ + d] = sum_[t * D_ + d] + v;
            sq_[(t + 1) * D_ + d] = sq_[t * D_ + d] + v * v;
        }
    }
}

double L2Cost::operator()(std::size_t s, std::size_t t) const {
    const double n = static_cast<double>(t - s);
    double cost = 0.0;
    for (std::size_t d = 0; d < D_; ++d) {
        const double sum = sum_[t * D_ + d] - sum_[s * D_ + d];
        const double sq = sq_[t * D_ + d] - sq_[s * D_ + d];
        cost += sq - sum * sum / n;
    }
    return std::max(0.0, cost);
}

PenalizedSegmentation pelt_search(const L2Cost& cost, double penalty, int min_size) {
    const std::size_t T = cost.length();
    const std::size_t m = static_cast<std::size_t>(std::max(1, min_size));
    std::vector<double> F(T + 1, kInf);
    std::vector<std::size_t> last(T + 1, 0);
    F[0] = -penalty;

    // A point pruned at time t stays admissible for ends before t + m: the
    // pruning inequality only routes through t once t is itself a valid
    // changepoint.
    struct Active {
        std::size_t s;
        std::size_t expires;
    };
    std::vector<Active> active{{0, std::numeric_limits<std::size_t>::max()}};
    std::vector<double> values;

    for (std::size_t t = m; t <= T; ++t) {
        values.assign(active.size(), kInf);
        double best = kInf;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            const auto& a = active[i];
            if (t - a.s < m) continue;
            values[i] = F[a.s] + cost(a.s, t);
            const double total = values[i] + penalty;
            if (total < best) {
                best = total;
                arg = a.s;
            }
        }
        F[t] = best;
        last[t] = arg;
        if (!std::isfinite(best)) continue;

        const double tol = 1e-9 * (1.0 + std::abs(best));
        for (std::size_t i = 0; i < active.size(); ++i) {
            auto& a = active[i];
            if (std::isfinite(values[i]) && a.expires == std::numeric_limits<std::size_t>::max() && values[i] > best + tol) {
                a.expires = t + m;
            }
        }
        std::erase_if(active, [&](const Active& a) { return a.expires <= t + 1; });
        active.push_back({t, std::numeric_limits<std::size_t>::max()});
    }

    PenalizedSegmentation out;
    out.cost = F[T];
    for (std::size_t t = T; t > 0;) {
        const std::size_t s = last[t];
        if (s == 0) break;
        out.changepoints.push_back(static_cast<int>(s));
        t = s;
    }
    std::reverse(out.changepoints.begin(), out.changepoints.end());
    return out;
}

double default_pelt_penalty(std::size_t dim, std::size_t T) {
    return 2.0 * static_cast<double>(dim) * std::log(static_cast<double>(T));
}

Boundaries assign_to_slots(std::span<const int> detected, std::size_t T, int num_boundaries) {
    const Boundaries slots = quantile_positions(T, num_boundaries);
    std::vector<int> points(detected.begin(), detected.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const std::size_t S = slots.size();
    const std::size_t N = points.size();
    // Match the smaller side completely into the larger, order-preserving.
    const bool slots_small = S <= N;
    const std::size_t a_n = slots_small ? S : N;
    const std::size_t b_n = slots_small ? N : S;
    auto a_at = [&](std::size_t i) { return slots_small ? slots[i] : points[i]; };
    auto b_at = [&](std::size_t j) { return slots_small ? points[j] : slots[j]; };

    // dp[i][j]: first i of the small side matched within the first j of the large side.
    std::vector<std::vector<double>> dp(a_n + 1, std::vector<double>(b_n + 1, kInf));
    std::vector<std::vector<char>> took(a_n + 1, std::vector<char>(b_n + 1, 0));
    for (std::size_t j = 0; j <= b_n; ++j) dp[0][j] = 0.0;
    for (std::size_t i = 1; i <= a_n; ++i) {
        for (std::size_t j = i; j <= b_n; ++j) {
            const double take = dp[i - 1][j - 1] + std::abs(a_at(i - 1) - b_at(j - 1));
            const double skip = dp[i][j - 1];
            if (skip < take) {
                dp[i][j] = skip;
            } else {
                dp[i][j] = take;
                took[i][j] = 1;
            }
        }
    }

    Boundaries out = slots;
    for (std::size_t i = a_n, j = b_n; i > 0;) {
        if (took[i][j]) {
            const std::size_t slot = slots_small ? i - 1 : j - 1;
            const std::size_t point = slots_small ? j - 1 : i - 1;
            out[slot] = points[point];
            --i;
            --j;
        } else {
            --j;
        }
    }
    return out;
}

Boundaries pelt_l2(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg) {
    const std::size_t T = trial.length();
    const int m = min_segment_length(T, cfg.min_seg_frac);
    if (static_cast<int>(T) < cfg.num_stages() * m) throw DataError("trial '" + trial.trial_id + "' too short for PELT");
    const double penalty = bcfg.pelt_penalty.value_or(default_pelt_penalty(trial.dim(), T));
    const auto seg = pelt_search(L2Cost(trial.x), penalty, m);
    return repair(assign_to_slots(seg.changepoints, T, cfg.num_boundaries), T, cfg);
}

// ---------------------------------------------------------------- kernel CPD

Matrix rbf_gram(const Matrix& x, double sigma, Exec exec) {
    const long T = static_cast<long>(x.rows());
    const std::size_t D = x.cols();
    const double scale = -1.0 / (2.0 * sigma * sigma);
    Matrix gram(x.rows(), x.rows(), 0.0);
    auto fill_row = [&](long i) {
        const auto xi = x.row(static_cast<std::size_t>(i));
        gram(i, i) = 1.0;
        for (long j = i + 1; j < T; ++j) {
            const auto xj = x.row(static_cast<std::size_t>(j));
            double d2 = 0.0;
            for (std::size_t d = 0; d < D; ++d) {
                const double diff = xi[d] - xj[d];
                d2 += diff * diff;
            }
            const double k = std::exp(d2 * scale);
            gram(i, j) = k;
            gram(j, i) = k;
        }
    };
    if (exec == Exec::serial) {
        for (long i = 0; i < T; ++i) fill_row(i);
    } else {
#pragma omp parallel for schedule(dynamic, 8)
        for (long i = 0; i < T; ++i) fill_row(i);
    }
    return gram;
}

double median_pairwise_distance(const Matrix& x, std::size_t max_pairs) {
    const std::size_t T = x.rows();
    if (T < 2) return 0.0;
    auto dist = [&](std::size_t a, std::size_t b) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < x.cols(); ++d) {
            const double diff = x(a, d) - x(b, d);
            d2 += diff * diff;
        }
        return std::sqrt(d2);
    };
    std::vector<double> dists;
    const std::size_t total = T * (T - 1) / 2;
    if (total <= max_pairs) {
        dists.reserve(total);
        for (std::size_t a = 0; a < T; ++a) {
            for (std::size_t b = a + 1; b < T; ++b) dists.push_back(dist(a, b));
        }
    } else {
        Rng rng = make_stream(0x6b65726e656cULL, T);
        dists.reserve(max_pairs);
        while (dists.size() < max_pairs) {
            const auto a = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(T) - 1));
            const auto b = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(T) - 1));
            if (a != b) dists.push_back(dist(a, b));
        }
    }
    std::sort(dists.begin(), dists.end());
    const std::size_t n = dists.size();
    return n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

KernelCost::KernelCost(const Matrix& gram) : T_(gram.rows()), diag_(gram.rows() + 1, 0.0), box_((T_ + 1) * (T_ + 1), 0.0) {
    const std::size_t W = T_ + 1;
    for (std::size_t i = 0; i < T_; ++i) {
        diag_[i + 1] = diag_[i] + gram(i, i);
        double row = 0.0;
        for (std::size_t j = 0; j < T_; ++j) {
            row += gram(i, j);
            box_[(i + 1) * W + (j + 1)] = box_[i * W + (j + 1)] + row;
        }
    }
}

double KernelCost::operator()(std::size_t s, std::size_t t) const {
    const std::size_t W = T_ + 1;
    const double n = static_cast<double>(t - s);
    const double block = box_[t * W + t] - box_[s * W + t] - box_[t * W + s] + box_[s * W + s];
    return (diag_[t] - diag_[s]) - block / n;
}

FixedSegmentation kernel_dp(const KernelCost& cost, int n_bkps, int min_size) {
    const std::size_t T = cost.length();
    const std::size_t m = static_cast<std::size_t>(std::max(1, min_size));
    const std::size_t B = static_cast<std::size_t>(n_bkps);
    if (T < (B + 1) * m) throw DataError("sequence too short for " + std::to_string(B) + " changepoints");

    std::vector<std::vector<double>> f(B + 1, std::vector<double>(T + 1, kInf));
    std::vector<std::vector<std::size_t>> arg(B + 1, std::vector<std::size_t>(T + 1, 0));
    for (std::size_t t = m; t <= T; ++t) f[0][t] = cost(0, t);
    for (std::size_t c = 1; c <= B; ++c) {
        for (std::size_t t = (c + 1) * m; t <= T; ++t) {
            double best = kInf;
            std::size_t best_s = 0;
            for (std::size_t s = c * m; s + m <= t; ++s) {
                if (!std::isfinite(f[c - 1][s])) continue;
                const double v = f[c - 1][s] + cost(s, t);
                if (v < best) {
                    best = v;
                    best_s = s;
                }
            }
            f[c][t] = best;
            arg[c][t] = best_s;
        }
    }
    FixedSegmentation out;
    out.cost = f[B][T];
    out.boundaries.resize(B);
    std::size_t t = T;
    for (std::size_t c = B; c > 0; --c) {
        t = arg[c][t];
        out.boundaries[c - 1] = static_cast<int>(t);
    }
    return out;
}

Boundaries kernel_cpd_rbf(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg) {
    const std::size_t T = trial.length();
    const int m = min_segment_length(T, cfg.min_seg_frac);
    if (static_cast<int>(T) < cfg.num_stages() * m) throw DataError("trial '" + trial.trial_id + "' too short for kernel CPD");
    const double median = median_pairwise_distance(trial.x, bcfg.kernel_max_pairs);
    if (median <= cfg.epsilon) {
        // Identical samples: every segmentation costs zero.
        return repair(quantile_positions(T, cfg.num_boundaries), T, cfg);
    }
    const KernelCost cost(rbf_gram(trial.x, median));
    return repair(kernel_dp(cost, cfg.num_boundaries, m).boundaries, T, cfg);
}

// ---------------------------------------------------------------- PCA(1)

Pca1Projection pca1(const Matrix& x) {
    const std::size_t T = x.rows();
    const std::size_t D = x.cols();
    if (T < 2) throw std::invalid_argument("pca1 needs at least 2 samples");

    Pca1Projection out;
    out.mean.assign(D, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t d = 0; d < D; ++d) out.mean[d] += x(t, d);
    }
    for (auto& v : out.mean) v /= static_cast<double>(T);

    std::vector<double> cov(D * D, 0.0);
    std::vector<double> centered(D);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t d = 0; d < D; ++d) centered[d] = x(t, d) - out.mean[d];
        for (std::size_t a = 0; a < D; ++a) {
            const double ca = centered[a];
            if (ca == 0.0) continue;
            for (std::size_t b = a; b < D; ++b) cov[a * D + b] += ca * centered[b];
        }
    }
    for (std::size_t a = 0; a < D; ++a) {
        for (std::size_t b = a; b < D; ++b) {
            cov[a * D + b] /= static_cast<double>(T);
            cov[b * D + a] = cov[a * D + b];
        }
    }

    auto multiply = [&](const std::vector<double>& v) {
        std::vector<double> r(D, 0.0);
        for (std::size_t a = 0; a < D; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < D; ++b) acc += cov[a * D + b] * v[b];
            r[a] = acc;
        }
        return r;
    };
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e * e;
        return std::sqrt(s);
    };

    std::size_t start = 0;
    for (std::size_t d = 1; d < D; ++d) {
        if (cov[d * D + d] > cov[start * D + start]) start = d;
    }
    std::vector<double> v(D);
    for (std::size_t a = 0; a < D; ++a) v[a] = cov[a * D + start];
    double n = norm(v);
    if (!(n > 0.0)) {
        out.fallback = true;
        out.u1.assign(D, 0.0);
        out.u1[0] = 1.0;
    } else {
        for (auto& e : v) e /= n;
        for (out.iterations = 1; out.iterations <= 10000; ++out.iterations) {
            auto w = multiply(v);
            n = norm(w);
            if (!(n > 0.0)) break;
            double dot = 0.0;
            for (std::size_t a = 0; a < D; ++a) {
                w[a] /= n;
                dot += w[a] * v[a];
            }
            if (dot < 0.0) {
                for (auto& e : w) e = -e;
            }
            double diff = 0.0;
            for (std::size_t a = 0; a < D; ++a) diff += (w[a] - v[a]) * (w[a] - v[a]);
            v = std::move(w);
            if (std::sqrt(diff) < 1e-10) break;
        }
        out.u1 = std::move(v);
    }

    std::size_t lead = 0;
    for (std::size_t d = 1; d < D; ++d) {
        if (std::abs(out.u1[d]) > std::abs(out.u1[lead])) lead = d;
    }
    if (out.u1[lead] < 0.0) {
        for (auto& e : out.u1) e = -e;
    }

    out.z.assign(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        double acc = 0.0;
        for (std::size_t d = 0; d < D; ++d) acc += out.u1[d] * (x(t, d) - out.mean[d]);
        out.z[t] = acc;
    }
    return out;
}

// ---------------------------------------------------------------- BOCPD

namespace {

struct NigParams {
    double mu, kappa, alpha, beta;
};

double student_t_logpdf(double x, const NigParams& p) {
    const double nu = 2.0 * p.alpha;
    const double scale2 = p.beta * (p.kappa + 1.0) / (p.alpha * p.kappa);
    const double dev = x - p.mu;
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI * scale2) -
           0.5 * (nu + 1.0) * std::log1p(dev * dev / (nu * scale2));
}

NigParams nig_update(const NigParams& p, double x) {
    const double dev = x - p.mu;
    return {(p.kappa * p.mu + x) / (p.kappa + 1.0), p.kappa + 1.0, p.alpha + 0.5,
            p.beta + p.kappa * dev * dev / (2.0 * (p.kappa + 1.0))};
}

}  // namespace

RunLengthPosterior bocpd_run_length(std::span<const double> z, const BaselineConfig& bcfg) {
    const double hazard = 1.0 / bcfg.bocpd_hazard_lambda;
    const NigParams prior{bcfg.bocpd_mu0, bcfg.bocpd_kappa0, bcfg.bocpd_alpha0, bcfg.bocpd_beta0};

    RunLengthPosterior out;
    out.rows.reserve(z.size());
    std::vector<double> row{1.0};
    std::vector<NigParams> params{prior};
    std::vector<double> logw;

    for (double x : z) {
        const std::size_t n = row.size();
        logw.assign(n, -std::numeric_limits<double>::infinity());
        double lmax = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n; ++r) {
            if (row[r] <= 0.0) continue;
            logw[r] = std::log(row[r]) + student_t_logpdf(x, params[r]);
            lmax = std::max(lmax, logw[r]);
        }
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (row[r] > 0.0) sum += std::exp(logw[r] - lmax);
        }
        out.neg_log_pred.push_back(-(lmax + std::log(sum)));

        std::vector<double> next(n + 1, 0.0);
        next[0] = hazard;
        for (std::size_t r = 0; r < n; ++r) {
            if (row[r] > 0.0) next[r + 1] = (1.0 - hazard) * std::exp(logw[r] - lmax) / sum;
        }
        double total = 0.0;
        for (auto& v : next) {
            if (v < bcfg.bocpd_prune) v = 0.0;
            total += v;
        }
        for (auto& v : next) v /= total;

        std::vector<NigParams> next_params(n + 1);
        next_params[0] = prior;
        for (std::size_t r = 0; r < n; ++r) next_params[r + 1] = nig_update(params[r], x);

        out.map_run_length.push_back(static_cast<int>(std::max_element(next.begin(), next.end()) - next.begin()));
        out.rows.push_back(next);
        row = std::move(next);
        params = std::move(next_params);
    }
    return out;
}

std::vector<ScoredPoint> bocpd_candidates(const RunLengthPosterior& posterior) {
    std::vector<ScoredPoint> out;
    const auto& map = posterior.map_run_length;
    for (std::size_t i = 1; i < map.size(); ++i) {
        if (static_cast<double>(map[i]) < 0.5 * static_cast<double>(map[i - 1])) {
            // rows[i] has seen samples 0..i; a run of length r began at i + 1 - r.
            const int start = static_cast<int>(i) + 1 - map[i];
            if (start <= 0 || start >= static_cast<int>(map.size())) continue;
            out.push_back({start, posterior.neg_log_pred[static_cast<std::size_t>(start)]});
        }
    }
    std::sort(out.begin(), out.end(), [](const ScoredPoint& a, const ScoredPoint& b) {
        return a.position != b.position ? a.position < b.position : a.score > b.score;
    });
    out.erase(std::unique(out.begin(), out.end(), [](const ScoredPoint& a, const ScoredPoint& b) { return a.position == b.position; }),
              out.end());
    return out;
}

Boundaries bocpd_pca1(const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg) {
    const std::size_t T = trial.length();
    const int m = min_segment_length(T, cfg.min_seg_frac);
    if (static_cast<int>(T) < cfg.num_stages() * m) throw DataError("trial '" + trial.trial_id + "' too short for BOCPD");

    auto z = pca1(trial.x).z;
    double var = 0.0;
    for (double v : z) var += v * v;
    const double sd = std::sqrt(var / static_cast<double>(T));
    for (auto& v : z) v /= sd + cfg.epsilon;

    auto candidates = bocpd_candidates(bocpd_run_length(z, bcfg));
    std::stable_sort(candidates.begin(), candidates.end(), [](const ScoredPoint& a, const ScoredPoint& b) { return a.score > b.score; });

    std::vector<int> chosen;
    const int Ti = static_cast<int>(T);
    for (const auto& c : candidates) {
        if (static_cast<int>(chosen.size()) == cfg.num_boundaries) break;
        if (c.position < m || c.position > Ti - m) continue;
        const bool spaced = std::all_of(chosen.begin(), chosen.end(), [&](int p) { return std::abs(p - c.position) >= m; });
        if (spaced) chosen.push_back(c.position);
    }
    return repair(assign_to_slots(chosen, T, cfg.num_boundaries), T, cfg);
}

Boundaries run_baseline(Method method, const TrialMatrix& trial, const Config& cfg, const BaselineConfig& bcfg) {
    switch (method) {
        case Method::pelt_l2: return pelt_l2(trial, cfg, bcfg);
        case Method::kernel_rbf: return kernel_cpd_rbf(trial, cfg, bcfg);
        case Method::bocpd_pca1: return bocpd_pca1(trial, cfg, bcfg);
        case Method::ssel: break;
    }
    throw std::invalid_argument("run_baseline: '" + to_string(method) + "' is not a baseline");
}

}  // namespace ssel
