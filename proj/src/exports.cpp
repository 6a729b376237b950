#include "ssel/exports.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssel {

HeatmapAccumulator::HeatmapAccumulator(std::size_t num_stages, std::size_t dim)
    : sum_(num_stages, std::vector<double>(dim, 0.0)) {}

void HeatmapAccumulator::add(const std::vector<std::vector<double>>& stage_weights) {
    if (stage_weights.size() != sum_.size()) throw std::invalid_argument("heatmap: stage count mismatch");
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        const auto& w = stage_weights[k];
        if (w.size() != sum_[k].size()) throw std::invalid_argument("heatmap: weight dimension mismatch");
        double l1 = 0.0;
        for (double v : w) l1 += std::abs(v);
        if (l1 == 0.0) continue;
        for (std::size_t d = 0; d < w.size(); ++d) sum_[k][d] += std::abs(w[d]) / l1;
    }
    ++count_;
}

std::vector<std::vector<double>> HeatmapAccumulator::mean() const {
    auto out = sum_;
    if (count_ == 0) return out;
    for (auto& row : out) {
        for (auto& v : row) v /= static_cast<double>(count_);
    }
    return out;
}

std::vector<double> PrincipalComponents::project(const std::vector<double>& v) const {
    if (v.size() != mean.size()) throw std::invalid_argument("pca: vector length mismatch");
    std::vector<double> out(components.size(), 0.0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (std::size_t d = 0; d < v.size(); ++d) out[c] += (v[d] - mean[d]) * components[c][d];
    }
    return out;
}

PrincipalComponents fit_pca(const std::vector<std::vector<double>>& rows, std::size_t n_components) {
    if (rows.size() < 2) throw std::invalid_argument("pca: need at least 2 rows");
    const std::size_t n = rows.front().size();
    if (n == 0) throw std::invalid_argument("pca: empty vectors");
    for (const auto& r : rows) {
        if (r.size() != n) throw std::invalid_argument("pca: rows differ in length");
    }
    n_components = std::min(n_components, n);

    PrincipalComponents out;
    out.mean.assign(n, 0.0);
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < n; ++d) out.mean[d] += r[d];
    }
    for (auto& m : out.mean) m /= static_cast<double>(rows.size());

    std::vector<double> a(n * n, 0.0);
    std::vector<double> centered(n);
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < n; ++d) centered[d] = r[d] - out.mean[d];
        for (std::size_t p = 0; p < n; ++p) {
            if (centered[p] == 0.0) continue;
            for (std::size_t q = p; q < n; ++q) a[p * n + q] += centered[p] * centered[q];
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            a[p * n + q] /= static_cast<double>(rows.size());
            a[q * n + p] = a[p * n + q];
        }
    }

    std::vector<double> v(n * n, 0.0);
    for (std::size_t p = 0; p < n; ++p) v[p * n + p] = 1.0;
    double total = 0.0;
    for (double x : a) total += x * x;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        }
        if (off <= 1e-30 * total || off == 0.0) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
    for (std::size_t c = 0; c < n_components; ++c) {
        const std::size_t col = order[c];
        std::vector<double> u(n);
        std::size_t arg = 0;
        for (std::size_t k = 0; k < n; ++k) {
            u[k] = v[k * n + col];
            if (std::abs(u[k]) > std::abs(u[arg])) arg = k;
        }
        if (u[arg] < 0.0) {
            for (auto& x : u) x = -x;
        }
        out.components.push_back(std::move(u));
        out.variances.push_back(std::max(0.0, a[col * n + col]));
    }
    return out;
}

}  // namespace ssel
