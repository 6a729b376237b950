#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssel::stats {

/// n subjects (rows) x k methods (columns).
struct PairedScores {
    std::vector<std::string> methods;
    std::vector<std::vector<double>> values;

    std::size_t n() const { return values.size(); }
    std::size_t k() const { return methods.size(); }
    void validate() const;
};

/// Mid-ranks (1-based) of `v`; tied values share the mean of their ranks.
std::vector<double> midranks(std::span<const double> v);

double chi2_upper_tail(double x, double df);
double normal_two_sided_p(double z);

struct FriedmanResult {
    double chi2 = 0.0;
    int df = 0;
    double p = 1.0;
};

/// Tie-corrected Friedman statistic on within-subject ranks.
FriedmanResult friedman(const PairedScores& scores);

/// chi2 / (n (k - 1)), clamped to [0, 1].
double kendalls_w(double chi2, std::size_t n, std::size_t k);

/// Raised when every paired difference is zero.
class UndefinedTest : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct WilcoxonResult {
    double z = 0.0;  ///< (W - mu) / sigma, tie-corrected, no continuity term; never positive
    double p = 1.0;
    double w = 0.0;        ///< min(W+, W-)
    std::size_t n_eff = 0;  ///< pairs with a nonzero difference
    bool exact = false;
};

struct WilcoxonOptions {
    std::size_t exact_max_n = 12;
    bool continuity = true;  ///< half-unit correction in the normal-approximation p
};

/// Two-sided signed-rank test on a - b. Zero differences are dropped; for
/// n_eff <= exact_max_n the p-value comes from enumerating all 2^n sign
/// patterns, otherwise from the tie-corrected normal approximation.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, const WilcoxonOptions& opt = {});

/// Holm step-down adjustment, returned in input order.
std::vector<double> holm_adjust(std::span<const double> p);

/// |z| / sqrt(n).
double effect_size_r(double z, std::size_t n);

struct KruskalWallisResult {
    double h = 0.0;
    int df = 0;
    double p = 1.0;
};

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct DunnComparison {
    std::size_t a, b;
    double z;
    double p;
    double p_holm;
};

/// Dunn's rank-sum post-hoc with tie correction and Holm adjustment.
std::vector<DunnComparison> dunn_test(const std::vector<std::vector<double>>& groups);

}  // namespace ssel::stats
