#pragma once

#include <iosfwd>
#include <vector>

#include "stoprule/model.hpp"

namespace stoprule::oracle {

// ============================================================================
// Independent ground truth for the exact evaluators: exhaustive permutation
// enumeration at small n, and backward-induction dynamic programming over
// relative-rank states (k, j) at moderate n. The DP makes no threshold
// assumption; threshold structure is discovered, not imposed.
// ============================================================================

inline constexpr int kEnumerationMaxN = 10; // n! permutations
inline constexpr int kDpExactMaxN = 300;    // exact rationals
inline constexpr int kDpFloatMaxN = 5000;

// P(candidate with relative rank j among the first k has overall rank i)
//   = C(i-1, j-1) C(n-i, k-j) / C(n, k).
Rat overall_rank_prob(int n, int k, int j, int i);

// Optimal-play value tables. reject[k] is the expected payoff of rejecting
// the k-th candidate under optimal continuation (reject[n] = 0); the value
// of a state is max(accept_value, reject_value), ties resolved as reject.
// reject[0] is the overall optimal expected payoff.
template <class T>
struct Policy {
    ProblemSpec spec;
    std::vector<T> reject; // index 0..n

    T reject_value(int k) const { return reject[static_cast<size_t>(k)]; }
    T accept_value(int k, int j) const;
    T value(int k, int j) const;
    bool accepts(int k, int j) const; // strict: accept only if it beats rejecting
    T root_value() const { return reject[0]; }
};

using PolicyQ = Policy<Rat>;
using PolicyD = Policy<double>;

PolicyQ dp_solve_exact(const ProblemSpec& spec); // n <= kDpExactMaxN
PolicyD dp_solve(const ProblemSpec& spec);       // n <= kDpFloatMaxN

// Threshold-structure check of a solved policy. For each acceptance class
// (relatively-best, relatively-worst, relatively-second-best, as the
// variant/payoff dictates) the accept states must form a tail {k > t};
// states where accepting and rejecting tie may fall on either side.
struct ThresholdCheck {
    bool ok = false;
    Strategy strategy; // one threshold, or (r, s) for the two-class families

    struct Deviation {
        int k = 0;
        int j = 0;
        std::string note;
    };
    std::vector<Deviation> counterexamples;
};

ThresholdCheck extract_thresholds(const PolicyQ& policy);
ThresholdCheck extract_thresholds(const PolicyD& policy);

// Average payoff of executing the strategy over all n! arrival orders,
// exact. Ground truth for every evaluator in `exact`.
EvalResult enumerate_permutations(const ProblemSpec& spec, const Strategy& strat);

// Verifies the postdoc recurrence
//   T_n(r) = (1/(r+1)) C(r+1,2)/C(n,2) + (r/(r+1)) T_n(r+1),  T_n(n-1) = 1/n
// against the closed form r(n-r)/(n(n-1)) for all 1 <= r <= n-1, exactly.
bool recurrence_check_T(int n, int* first_failing_r = nullptr);

// Policy dump, one row per state: k, j, decision, value.
void export_policy_csv(const PolicyQ& policy, std::ostream& out);
void export_policy_csv(const PolicyD& policy, std::ostream& out);

} // namespace stoprule::oracle
