#pragma once

#include <map>
#include <string>
#include <vector>

namespace coreset {

struct DunnComparison {
    std::string method_a;
    std::string method_b;
    double z = 0.0;
    double p_raw = 1.0;
    double p_corrected = 1.0;
};

struct DunnReport {
    double kruskal_h = 0.0;    // omnibus statistic, tie-corrected
    double kruskal_p = 1.0;    // chi-square tail, k-1 dof
    std::vector<DunnComparison> pairs;
};

// Dunn post-hoc z-tests on pooled midranks with tie correction; p-values are
// two-sided normal tails multiplied by correction_factor (capped at 1). The
// omnibus Kruskal-Wallis statistic is reported alongside but does not gate
// the pairwise tests.
DunnReport kruskal_dunn(const std::map<std::string, std::vector<double>>& observations,
                        int correction_factor);

// Two-sided standard normal tail 2*(1 - Phi(|z|)).
double normal_two_sided_p(double z);

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi_square_tail(double x, int k);

}  // namespace coreset
