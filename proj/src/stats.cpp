#include "ssel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

namespace ssel::stats {

void PairedScores::validate() const {
    if (n() < 2) throw std::invalid_argument("paired scores need at least 2 subjects");
    if (k() < 2) throw std::invalid_argument("paired scores need at least 2 methods");
    for (const auto& row : values) {
        if (row.size() != k()) throw std::invalid_argument("paired scores row has the wrong number of methods");
        for (double v : row) {
            if (!std::isfinite(v)) throw std::invalid_argument("paired scores contain a missing or non-finite value");
        }
    }
}

std::vector<double> midranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

/// Sum of (t^3 - t) over tie groups.
double tie_sum(std::span<const double> values) {
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        sum += t * t * t - t;
        i = j + 1;
    }
    return sum;
}

}  // namespace

double chi2_upper_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double normal_two_sided_p(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

FriedmanResult friedman(const PairedScores& scores) {
    scores.validate();
    const double n = static_cast<double>(scores.n());
    const double k = static_cast<double>(scores.k());
    std::vector<double> rank_sums(scores.k(), 0.0);
    double ties = 0.0;
    for (const auto& row : scores.values) {
        const auto r = midranks(row);
        for (std::size_t j = 0; j < r.size(); ++j) rank_sums[j] += r[j];
        ties += tie_sum(row);
    }
    double ss = 0.0;
    for (double R : rank_sums) ss += R * R;
    const double numer = 12.0 / (n * k * (k + 1.0)) * ss - 3.0 * n * (k + 1.0);
    const double correction = 1.0 - ties / (n * (k * k * k - k));

    FriedmanResult out;
    out.df = static_cast<int>(scores.k()) - 1;
    out.chi2 = correction > 1e-12 ? std::max(0.0, numer / correction) : 0.0;
    out.p = chi2_upper_tail(out.chi2, out.df);
    return out;
}

double kendalls_w(double chi2, std::size_t n, std::size_t k) {
    if (n < 1 || k < 2) throw std::invalid_argument("kendalls_w needs n >= 1 and k >= 2");
    return std::clamp(chi2 / (static_cast<double>(n) * static_cast<double>(k - 1)), 0.0, 1.0);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, const WilcoxonOptions& opt) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon samples differ in length");
    if (a.size() < 2) throw std::invalid_argument("wilcoxon needs at least 2 pairs");
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }
    if (diff.empty()) throw UndefinedTest("all paired differences are zero");

    std::vector<double> mags(diff.size());
    std::transform(diff.begin(), diff.end(), mags.begin(), [](double d) { return std::abs(d); });
    const auto ranks = midranks(mags);
    double w_plus = 0.0, total = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        total += ranks[i];
        if (diff[i] > 0.0) w_plus += ranks[i];
    }

    WilcoxonResult out;
    out.n_eff = diff.size();
    out.w = std::min(w_plus, total - w_plus);

    const double n = static_cast<double>(out.n_eff);
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_sum(mags) / 48.0;
    const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
    out.z = sd > 0.0 ? (out.w - mu) / sd : 0.0;

    if (out.n_eff <= opt.exact_max_n) {
        const std::size_t patterns = std::size_t{1} << out.n_eff;
        std::size_t extreme = 0;
        for (std::size_t mask = 0; mask < patterns; ++mask) {
            double wp = 0.0;
            for (std::size_t i = 0; i < out.n_eff; ++i) {
                if (mask & (std::size_t{1} << i)) wp += ranks[i];
            }
            if (std::min(wp, total - wp) <= out.w + 1e-9) ++extreme;
        }
        out.p = std::min(1.0, static_cast<double>(extreme) / static_cast<double>(patterns));
        out.exact = true;
    } else {
        double num = out.w - mu;
        if (opt.continuity && num != 0.0) num += num < 0.0 ? std::min(0.5, -num) : -std::min(0.5, num);
        out.p = sd > 0.0 ? normal_two_sided_p(num / sd) : 1.0;
    }
    return out;
}

std::vector<double> holm_adjust(std::span<const double> p) {
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::vector<double> out(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        running = std::max(running, static_cast<double>(m - i) * p[order[i]]);
        out[order[i]] = std::min(1.0, running);
    }
    return out;
}

double effect_size_r(double z, std::size_t n) {
    if (n < 1) throw std::invalid_argument("effect size needs n >= 1");
    return std::abs(z) / std::sqrt(static_cast<double>(n));
}

namespace {

struct PooledRanks {
    std::vector<double> mean_rank;
    std::vector<double> sizes;
    double n_total = 0.0;
    double ties = 0.0;
};

PooledRanks pool(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("need at least 2 groups");
    std::vector<double> all;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("empty group");
        all.insert(all.end(), g.begin(), g.end());
    }
    const auto ranks = midranks(all);
    PooledRanks out;
    out.n_total = static_cast<double>(all.size());
    out.ties = tie_sum(all);
    std::size_t pos = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += ranks[pos++];
        out.sizes.push_back(static_cast<double>(g.size()));
        out.mean_rank.push_back(sum / static_cast<double>(g.size()));
    }
    return out;
}

}  // namespace

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    const auto pr = pool(groups);
    const double N = pr.n_total;
    double h = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) h += pr.sizes[i] * pr.mean_rank[i] * pr.mean_rank[i];
    h = 12.0 / (N * (N + 1.0)) * h - 3.0 * (N + 1.0);
    const double correction = 1.0 - pr.ties / (N * N * N - N);
    KruskalWallisResult out;
    out.df = static_cast<int>(groups.size()) - 1;
    out.h = correction > 1e-12 ? std::max(0.0, h / correction) : 0.0;
    out.p = chi2_upper_tail(out.h, out.df);
    return out;
}

std::vector<DunnComparison> dunn_test(const std::vector<std::vector<double>>& groups) {
    const auto pr = pool(groups);
    const double N = pr.n_total;
    const double base = N * (N + 1.0) / 12.0 - pr.ties / (12.0 * (N - 1.0));
    std::vector<DunnComparison> out;
    for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            const double se = std::sqrt(base * (1.0 / pr.sizes[a] + 1.0 / pr.sizes[b]));
            const double z = se > 0.0 ? (pr.mean_rank[a] - pr.mean_rank[b]) / se : 0.0;
            out.push_back({a, b, z, normal_two_sided_p(z), 0.0});
        }
    }
    std::vector<double> raw;
    for (const auto& c : out) raw.push_back(c.p);
    const auto adj = holm_adjust(raw);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].p_holm = adj[i];
    return out;
}

}  // namespace ssel::stats
