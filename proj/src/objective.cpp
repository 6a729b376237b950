#include "ssel/objective.hpp"

#include <cmath>

namespace ssel {

AR1Fit fit_ar1(std::span<const double> z) {
    if (z.size() < 3) {
        throw SequenceTooShort("AR(1) fit needs at least 3 samples, got " + std::to_string(z.size()));
    }
    const std::size_t n = z.size() - 1;
    const double inv_n = 1.0 / static_cast<double>(n);

    double mx = 0.0, my = 0.0, sq = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        mx += z[t - 1];
        my += z[t];
        sq += z[t - 1] * z[t - 1];
    }
    mx *= inv_n;
    my *= inv_n;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        const double dx = z[t - 1] - mx;
        sxx += dx * dx;
        sxy += dx * (z[t] - my);
    }

    AR1Fit fit;
    fit.n_pairs = n;
    if (sxx <= 1e-14 * sq) {
        fit.a = 0.0;
        fit.b = my;
    } else {
        fit.a = sxy / sxx;
        fit.b = my - fit.a * mx;
    }
    double sse = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        const double r = z[t] - fit.a * z[t - 1] - fit.b;
        sse += r * r;
    }
    fit.mse = sse * inv_n;
    return fit;
}

GaussianFit fit_gaussian(std::span<const double> z, double floor_var) {
    if (z.empty()) throw std::invalid_argument("gaussian fit of an empty sequence");
    const double n = static_cast<double>(z.size());
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    return {mean, std::max(ss / n, floor_var)};
}

double sym_kl_gaussian(double mu1, double var1, double mu2, double var2) {
    const double dm = mu1 - mu2;
    // Summing the ratio pair first keeps the result bit-identical under
    // argument exchange.
    const double ratios = var1 / var2 + var2 / var1;
    const double inv = 1.0 / var1 + 1.0 / var2;
    return 0.5 * (ratios + dm * dm * inv - 2.0);
}

namespace {

double floor_var(const Config& cfg) { return cfg.epsilon * cfg.epsilon; }

std::vector<double> shared_weights(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) out[d] = a[d] + b[d];
    return out;
}

/// Boundary divergence between stages k and k+1 of one trial.
double boundary_divergence(const Matrix& x, const Boundaries& b, std::size_t k, const Candidate& c, const Config& cfg,
                           const std::vector<double>* z_left, const std::vector<double>* z_right) {
    const std::size_t T = x.rows();
    const auto left_iv = stage_interval(b, T, k);
    const auto right_iv = stage_interval(b, T, k + 1);
    GaussianFit left, right;
    if (cfg.boundary_projection == BoundaryProjection::per_stage) {
        left = z_left ? fit_gaussian(*z_left, floor_var(cfg)) : fit_gaussian(project_stage(x, left_iv, c.weights[k]), floor_var(cfg));
        right = z_right ? fit_gaussian(*z_right, floor_var(cfg))
                        : fit_gaussian(project_stage(x, right_iv, c.weights[k + 1]), floor_var(cfg));
    } else {
        const auto w = shared_weights(c.weights[k], c.weights[k + 1]);
        left = fit_gaussian(project_stage(x, left_iv, w), floor_var(cfg));
        right = fit_gaussian(project_stage(x, right_iv, w), floor_var(cfg));
    }
    return sym_kl_gaussian(left.mean, left.var, right.mean, right.var);
}

}  // namespace

double ar_term(const Candidate& c, const Dataset& dataset) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dataset.trials.size(); ++j) {
        const auto& x = dataset.trials[j].x;
        for (std::size_t k = 0; k < c.weights.size(); ++k) {
            const auto z = project_stage(x, stage_interval(c.boundaries[j], x.rows(), k), c.weights[k]);
            sum += fit_ar1(z).mse;
        }
    }
    return sum;
}

double bdry_term(const Candidate& c, const Dataset& dataset, const Config& cfg) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dataset.trials.size(); ++j) {
        for (std::size_t k = 0; k + 1 < c.weights.size(); ++k) {
            sum += boundary_divergence(dataset.trials[j].x, c.boundaries[j], k, c, cfg, nullptr, nullptr);
        }
    }
    return sum;
}

double align_term(const Candidate& c, const Dataset& dataset) {
    const std::size_t J = dataset.trials.size();
    if (J == 0) return 0.0;
    const std::size_t B = c.boundaries.front().size();
    std::vector<double> mean(B, 0.0);
    std::vector<std::vector<double>> alpha(J, std::vector<double>(B));
    for (std::size_t j = 0; j < J; ++j) {
        const double T = static_cast<double>(dataset.trials[j].length());
        for (std::size_t i = 0; i < B; ++i) {
            alpha[j][i] = static_cast<double>(c.boundaries[j][i]) / T;
            mean[i] += alpha[j][i];
        }
    }
    for (auto& m : mean) m /= static_cast<double>(J);
    double sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < B; ++i) {
            const double d = alpha[j][i] - mean[i];
            sum += d * d;
        }
    }
    return sum;
}

double sparsity_term(const Candidate& c) {
    double sum = 0.0;
    for (const auto& w : c.weights) {
        for (double v : w) sum += std::abs(v);
    }
    return sum;
}

ObjectiveBreakdown total_objective(const Candidate& c, const Dataset& dataset, const Config& cfg) {
    ObjectiveBreakdown out;
    const std::size_t K = c.weights.size();
    std::vector<std::vector<double>> z(K);
    for (std::size_t j = 0; j < dataset.trials.size(); ++j) {
        const auto& x = dataset.trials[j].x;
        for (std::size_t k = 0; k < K; ++k) {
            z[k] = project_stage(x, stage_interval(c.boundaries[j], x.rows(), k), c.weights[k]);
            out.ar_term += fit_ar1(z[k]).mse;
        }
        for (std::size_t k = 0; k + 1 < K; ++k) {
            out.bdry_term += boundary_divergence(x, c.boundaries[j], k, c, cfg, &z[k], &z[k + 1]);
        }
    }
    out.align_term = align_term(c, dataset);
    out.sparsity_term = sparsity_term(c);
    out.total = out.ar_term - cfg.lambda_bdry * out.bdry_term + cfg.lambda_align * out.align_term +
                cfg.lambda_1 * out.sparsity_term;
    return out;
}

}  // namespace ssel
