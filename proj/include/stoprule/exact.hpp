#pragma once

#include <cstdint>
#include <vector>

#include "stoprule/model.hpp"

namespace stoprule {

// ============================================================================
// Exact finite-n expected-payoff evaluators.
//
// Every evaluator returns the exact rational value (with a double shadow)
// as long as n <= kExactEvalMaxN; above that it switches to compensated
// double summation and the `exact` field is absent. All evaluators are pure.
// ============================================================================

inline constexpr int kExactEvalMaxN = 1000;

struct ArgmaxResult {
    Strategy best_strategy;
    EvalResult best_value;
    std::int64_t scanned = 0; // number of candidate strategies evaluated
};

// --- Classic secretary problem -------------------------------------------
// F_n(r) = (r/n) * sum_{k=r+1}^n 1/(k-1); r = 0 accepts the first candidate.
EvalResult classic_binary(int n, int r);
EvalResult classic_cost(int n, int r);       // payoff 1 - k/n on success
EvalResult classic_perquisite(int n, int r); // payoff 1 + k/n on success

// floor((n - 1/2)/e + 1/2), the refined approximation to the optimal cutoff.
int gilbert_mosteller_cutoff(int n);

// --- Best-or-Worst variant -------------------------------------------------
// Success = accepted candidate is the overall best or the overall worst.
// bw_binary uses the closed form 2r(n-r)/(n(n-1)); r in {0,1} gives 2/n
// (value 1 when n <= 2).
EvalResult bw_binary(int n, int r);
EvalResult bw_cost(int n, int r);
EvalResult bw_perquisite(int n, int r);

// Two-threshold rule (0 <= r <= s <= n-1): accept relatively-best candidates
// after interview r, relatively-worst candidates only after interview s.
// Pays M for the overall best, m for the overall worst. r = 0 accepts the
// opening candidate outright.
EvalResult bw_unbalanced(int n, int r, int s, double m, double M);

// Optimal cutoff for the binary Best-or-Worst problem, found by scan over
// r in [1, n-1] (r = 0 duplicates the value of r = 1 and is skipped so the
// scan lands on floor(n/2) at n = 3 as well).
ArgmaxResult bw_argmax(int n);

// --- Postdoc variant ---------------------------------------------------
// Success = accepted candidate is the overall second best.
EvalResult pd_binary(int n, int r);      // r(n-r)/(n(n-1)) = bw_binary/2
EvalResult pd_perquisite(int n, int r);  // r(n-r)(3n+1+r)/(2 n^2 (n-1))
// Two-threshold cost rule (0 <= r <= s <= n-1): relatively-best accepted
// after r, relatively-second-best after s; payoff 1 - k/n when the pick is
// the overall 2nd best.
EvalResult pd_cost(int n, int r, int s);

// Real maximizer of the perquisite payoff: (-1 - 2n + sqrt(1+7n+13n^2))/3.
// Rounding to the nearest integer gives the optimal cutoff.
double pd_perquisite_cutoff_exact(int n);

// --- Generic dispatch -------------------------------------------------------
EvalResult evaluate(const ProblemSpec& spec, const Strategy& strat);

// Exhaustive argmax scans. Ties break toward the
// smallest r, then the smallest s. argmax_two runs the full O(n^2) grid up
// to n = 2000 (or when force_full_scan), and a coarse-to-fine scan above.
ArgmaxResult argmax_one(const ProblemSpec& spec);
ArgmaxResult argmax_two(const ProblemSpec& spec, bool force_full_scan = false);
ArgmaxResult optimize(const ProblemSpec& spec, bool force_full_scan = false);

// Smallest r scanned for a one-threshold family (two-threshold families use
// 1 <= r <= s <= n-1). Postdoc needs r >= 1; binary Best-or-Worst starts at
// r = 1 because r = 0 duplicates the r = 1 value.
int min_threshold(Variant variant, PayoffKind kind);

// Value curve over all feasible r, computed with compensated double suffix
// sums in one O(n) pass. Index r maps to curve[r - min_threshold(...)].
std::vector<double> one_threshold_curve(const ProblemSpec& spec);

// Double-precision evaluators (the large-n path), exposed so tests can
// compare them against the exact rationals.
namespace detail {
double classic_value_d(int n, int r, PayoffKind kind);
double bw_value_d(int n, int r, PayoffKind kind);
double pd_value_d(int n, int r, PayoffKind kind);
double bw_unbalanced_d(int n, int r, int s, double m, double M);
double pd_cost_d(int n, int r, int s);
} // namespace detail

} // namespace stoprule
