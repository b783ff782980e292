#include "coreset/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coreset/errors.hpp"

namespace coreset {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

namespace {

// Regularized upper incomplete gamma Q(a, x) via series / continued fraction.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw NumericalError("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // Series for P(a, x), return 1 - P.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Continued fraction for Q(a, x).
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_tail(double x, int k) {
    if (x <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(k) / 2.0, x / 2.0);
}

DunnReport kruskal_dunn(const std::map<std::string, std::vector<double>>& observations,
                        int correction_factor) {
    if (observations.size() < 2) {
        throw ConfigError("kruskal_dunn: need at least two methods");
    }
    if (correction_factor < 1) {
        throw ConfigError("kruskal_dunn: correction factor must be >= 1");
    }

    struct Obs {
        double value;
        std::size_t group;
    };
    std::vector<Obs> pooled;
    std::vector<std::string> names;
    std::vector<std::size_t> group_sizes;
    for (const auto& [name, values] : observations) {
        if (values.empty()) {
            throw ConfigError("kruskal_dunn: empty observation vector for " + name);
        }
        for (double v : values) {
            pooled.push_back({v, names.size()});
        }
        names.push_back(name);
        group_sizes.push_back(values.size());
    }
    const std::size_t N = pooled.size();
    std::sort(pooled.begin(), pooled.end(),
              [](const Obs& a, const Obs& b) { return a.value < b.value; });

    // Midranks and tie statistic sum(t^3 - t).
    std::vector<double> rank_sum(names.size(), 0.0);
    double tie_cubes = 0.0;
    std::size_t i = 0;
    while (i < N) {
        std::size_t j = i;
        while (j < N && pooled[j].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i);
        tie_cubes += t * t * t - t;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            rank_sum[pooled[k].group] += midrank;
        }
        i = j;
    }

    const double Nd = static_cast<double>(N);
    DunnReport report;

    // Kruskal-Wallis omnibus with tie correction.
    double h = 0.0;
    for (std::size_t g = 0; g < names.size(); ++g) {
        const double ng = static_cast<double>(group_sizes[g]);
        h += rank_sum[g] * rank_sum[g] / ng;
    }
    h = 12.0 / (Nd * (Nd + 1.0)) * h - 3.0 * (Nd + 1.0);
    const double tie_factor = 1.0 - tie_cubes / (Nd * Nd * Nd - Nd);
    if (tie_factor > 0.0) {
        report.kruskal_h = h / tie_factor;
        report.kruskal_p =
            chi_square_tail(report.kruskal_h, static_cast<int>(names.size()) - 1);
    } else {
        report.kruskal_h = 0.0;  // every observation identical
        report.kruskal_p = 1.0;
    }

    // Dunn pairwise z with tie-corrected pooled variance.
    const double tie_term = tie_cubes / (12.0 * (Nd - 1.0));
    const double base_var = Nd * (Nd + 1.0) / 12.0 - tie_term;
    for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            const double na = static_cast<double>(group_sizes[a]);
            const double nb = static_cast<double>(group_sizes[b]);
            const double var = base_var * (1.0 / na + 1.0 / nb);
            DunnComparison cmp;
            cmp.method_a = names[a];
            cmp.method_b = names[b];
            if (var <= 0.0) {
                cmp.z = 0.0;
                cmp.p_raw = 1.0;
            } else {
                cmp.z = (rank_sum[a] / na - rank_sum[b] / nb) / std::sqrt(var);
                cmp.p_raw = normal_two_sided_p(cmp.z);
            }
            cmp.p_corrected = std::min(1.0, cmp.p_raw * static_cast<double>(correction_factor));
            report.pairs.push_back(cmp);
        }
    }
    return report;
}

}  // namespace coreset
