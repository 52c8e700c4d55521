#pragma once

#include <vector>

namespace clinsearch {

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p_two_tailed = 1.0;
    bool sig95 = false; ///< p < 0.05
    bool sig98 = false; ///< p < 0.02
};

/// Paired two-sample t-test over per-topic scores aligned by position.
/// All-zero differences give t = 0 (not significant); zero variance with a
/// nonzero mean is significant at both levels with p reported as 0.
/// Throws EvalError for n < 2 or mismatched lengths.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Two-tailed survival P(|T_df| > |t|) via the regularized incomplete beta.
double student_t_two_tailed(double t, int df);

} // namespace clinsearch
