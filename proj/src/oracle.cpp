#include "stoprule/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "stoprule/detail/scalar.hpp"
#include "stoprule/exact.hpp"

namespace stoprule::oracle {

using detail::from_real;
using detail::ratio;

Rat overall_rank_prob(int n, int k, int j, int i) {
    if (!(1 <= j && j <= k && k <= n && 1 <= i && i <= n))
        throw StopruleError(ErrorCode::DomainError, "need 1 <= j <= k <= n and 1 <= i <= n");
    if (i < j || i > n - k + j) return rat(0);
    const Int num = binomial_exact(i - 1, j - 1) * binomial_exact(n - i, k - j);
    return rat(num, binomial_exact(n, k));
}

// ---------------------------------------------------------------------------
// Backward-induction DP over states (k, j). Only a handful of j values per k
// can ever pay (the candidate must currently be relatively best / worst /
// second best to end up at the target overall rank), so a stage reduces in
// O(1) and the whole solve is O(n).
// ---------------------------------------------------------------------------

namespace {

// States at interview k with a nonzero acceptance value, depending on variant.
inline int class_states(Variant variant, int k, int out[2]) {
    int count = 0;
    out[count++] = 1;
    if (k >= 2) {
        if (variant == Variant::BestOrWorst) out[count++] = k;
        if (variant == Variant::Postdoc) out[count++] = 2;
    }
    return count;
}

} // namespace

template <class T>
T Policy<T>::accept_value(int k, int j) const {
    const int n = spec.n;
    const PayoffKind kind = spec.payoff.kind;

    // P(overall best) / P(overall worst) / P(overall 2nd) given rank j among k.
    const T p_best = (j == 1) ? ratio<T>(k, n) : T(0);
    const T p_worst = (j == k) ? ratio<T>(k, n) : T(0);

    if (kind == PayoffKind::Unbalanced) {
        if (n == 1) return from_real<T>(spec.payoff.M);
        return from_real<T>(spec.payoff.M) * p_best + from_real<T>(spec.payoff.m) * p_worst;
    }

    T weight(1);
    if (kind == PayoffKind::Cost) weight = ratio<T>(n - k, n);
    if (kind == PayoffKind::Perquisite) weight = ratio<T>(n + k, n);

    switch (spec.variant) {
    case Variant::Classic:
        return weight * p_best;
    case Variant::BestOrWorst:
        if (n == 1) return weight;
        return weight * (p_best + p_worst);
    case Variant::Postdoc: {
        T p_second(0);
        if (j == 1) p_second = ratio<T>(1LL * k * (n - k), 1LL * n * (n - 1));
        if (j == 2) p_second = ratio<T>(1LL * k * (k - 1), 1LL * n * (n - 1));
        return weight * p_second;
    }
    }
    return T(0);
}

template <class T>
T Policy<T>::value(int k, int j) const {
    return std::max(accept_value(k, j), reject_value(k));
}

template <class T>
bool Policy<T>::accepts(int k, int j) const {
    return accept_value(k, j) > reject_value(k);
}

namespace {

template <class T>
Policy<T> dp_core(const ProblemSpec& spec) {
    validate_spec(spec);
    const int n = spec.n;
    Policy<T> policy{spec, std::vector<T>(static_cast<size_t>(n) + 1, T(0))};
    for (int k = n - 1; k >= 0; --k) {
        const int next = k + 1;
        const T rej_next = policy.reject[static_cast<size_t>(next)];
        T sum = T(next) * rej_next;
        int states[2] = {0, 0};
        const int count = class_states(spec.variant, next, states);
        for (int idx = 0; idx < count; ++idx) {
            const T acc = policy.accept_value(next, states[idx]);
            if (acc > rej_next) sum += acc - rej_next;
        }
        policy.reject[static_cast<size_t>(k)] = sum / T(next);
    }
    return policy;
}

} // namespace

PolicyQ dp_solve_exact(const ProblemSpec& spec) {
    if (spec.n > kDpExactMaxN)
        throw StopruleError(ErrorCode::SizeLimit,
                            "exact DP is limited to n <= " + std::to_string(kDpExactMaxN));
    return dp_core<Rat>(spec);
}

PolicyD dp_solve(const ProblemSpec& spec) {
    if (spec.n > kDpFloatMaxN)
        throw StopruleError(ErrorCode::SizeLimit,
                            "DP is limited to n <= " + std::to_string(kDpFloatMaxN));
    return dp_core<double>(spec);
}

// ---------------------------------------------------------------------------
// Threshold extraction
// ---------------------------------------------------------------------------

namespace {

// Acceptance classes. "Nice" is the union of relatively-best and
// relatively-worst, which share one cutoff in the one-threshold
// Best-or-Worst rule; at k = 1 the single state belongs to both.
enum class StateClass { Best, Worst, Second, Nice };

const char* class_name(StateClass c) {
    switch (c) {
    case StateClass::Best: return "relatively-best";
    case StateClass::Worst: return "relatively-worst";
    case StateClass::Second: return "relatively-second-best";
    case StateClass::Nice: return "nice";
    }
    return "?";
}

// Relative ranks belonging to the class at interview k; empty when the class
// has no state there yet.
int class_members(StateClass c, int k, int out[2]) {
    switch (c) {
    case StateClass::Best: out[0] = 1; return 1;
    case StateClass::Worst:
        if (k < 2) return 0;
        out[0] = k;
        return 1;
    case StateClass::Second:
        if (k < 2) return 0;
        out[0] = 2;
        return 1;
    case StateClass::Nice:
        out[0] = 1;
        if (k < 2) return 1;
        out[1] = k;
        return 2;
    }
    return 0;
}

// -1 strictly reject, +1 strictly accept, 0 indifferent. Double policies get
// a relative tie band so float noise cannot masquerade as a counterexample.
template <class T>
int diff_sign(const Policy<T>& policy, int k, int j) {
    const T acc = policy.accept_value(k, j);
    const T rej = policy.reject_value(k);
    if constexpr (std::is_same_v<T, Rat>) {
        return acc > rej ? 1 : (acc < rej ? -1 : 0);
    } else {
        const double scale = std::max({1.0, std::abs(acc), std::abs(rej)});
        if (acc - rej > 1e-12 * scale) return 1;
        if (rej - acc > 1e-12 * scale) return -1;
        return 0;
    }
}

// Combined decision of the class at interview k; members must agree.
template <class T>
int class_sign(const Policy<T>& policy, StateClass c, int k, ThresholdCheck& check) {
    int members[2] = {0, 0};
    const int count = class_members(c, k, members);
    if (count == 0) return 0;
    int sign = diff_sign(policy, k, members[0]);
    for (int idx = 1; idx < count; ++idx) {
        const int other = diff_sign(policy, k, members[idx]);
        if (other * sign < 0)
            check.counterexamples.push_back(
                {k, members[idx],
                 std::string(class_name(c)) + " members disagree at k=" + std::to_string(k)});
        if (other != 0) sign = other;
    }
    return sign;
}

// First interview whose every state is strictly accepted. The process cannot
// get past it, so later states are off-path: the optimal strategy's shape is
// decided by the reachable ones. (With a cost payoff and small n the value
// table genuinely dips after such a stage: at n = 7 the Best-or-Worst cost
// policy strictly accepts the opening candidate, worth (1-1/n) 2/n, yet
// would strictly reject at k = 2 if it ever got there.)
template <class T>
int reachable_stages(const Policy<T>& policy) {
    const int n = policy.spec.n;
    for (int k = 1; k <= n; ++k) {
        bool all_accepted = true;
        for (int j = 1; j <= k && all_accepted; ++j)
            all_accepted = diff_sign(policy, k, j) > 0;
        if (all_accepted) return k;
    }
    return n;
}

// Threshold of one class over the reachable stages: t with "strictly accept"
// only at k > t and "strictly reject" only at k <= t. Indifferent states may
// fall either way.
template <class T>
int class_threshold(const Policy<T>& policy, StateClass c, int reach, ThresholdCheck& check) {
    const int n = policy.spec.n;
    int first_strict = reach + 1;
    for (int k = 1; k <= reach; ++k) {
        if (class_sign(policy, c, k, check) > 0) {
            first_strict = k;
            break;
        }
    }
    const int t = std::min(first_strict - 1, n - 1);
    for (int k = first_strict + 1; k <= reach; ++k) {
        if (class_sign(policy, c, k, check) < 0)
            check.counterexamples.push_back(
                {k, 0,
                 std::string(class_name(c)) + " rejected after being accepted at k=" +
                     std::to_string(first_strict)});
    }
    return t;
}

template <class T>
void require_never_accepted(const Policy<T>& policy, StateClass c, int reach,
                            ThresholdCheck& check) {
    for (int k = 1; k <= reach; ++k) {
        if (class_sign(policy, c, k, check) > 0)
            check.counterexamples.push_back(
                {k, 0, std::string(class_name(c)) + " strictly accepted; expected never"});
    }
}

template <class T>
ThresholdCheck extract_impl(const Policy<T>& policy) {
    const Variant variant = policy.spec.variant;
    const PayoffKind kind = policy.spec.payoff.kind;
    ThresholdCheck check;
    const int reach = reachable_stages(policy);

    if (kind == PayoffKind::Unbalanced) {
        const int r = class_threshold(policy, StateClass::Best, reach, check);
        const int s = class_threshold(policy, StateClass::Worst, reach, check);
        if (r > s)
            check.counterexamples.push_back(
                {0, 0, "best-class threshold exceeds worst-class threshold"});
        check.strategy = Strategy::two(r, std::max(r, s));
    } else if (variant == Variant::Postdoc && kind == PayoffKind::Cost) {
        const int r = class_threshold(policy, StateClass::Best, reach, check);
        const int s = class_threshold(policy, StateClass::Second, reach, check);
        if (r > s)
            check.counterexamples.push_back(
                {0, 0, "best-class threshold exceeds second-class threshold"});
        check.strategy = Strategy::two(r, std::max(r, s));
    } else if (variant == Variant::Postdoc) {
        require_never_accepted(policy, StateClass::Best, reach, check);
        check.strategy = Strategy::one(class_threshold(policy, StateClass::Second, reach, check));
    } else if (variant == Variant::BestOrWorst) {
        check.strategy = Strategy::one(class_threshold(policy, StateClass::Nice, reach, check));
    } else {
        check.strategy = Strategy::one(class_threshold(policy, StateClass::Best, reach, check));
    }

    check.ok = check.counterexamples.empty();
    return check;
}

} // namespace

ThresholdCheck extract_thresholds(const PolicyQ& policy) { return extract_impl(policy); }
ThresholdCheck extract_thresholds(const PolicyD& policy) { return extract_impl(policy); }

// ---------------------------------------------------------------------------
// Exhaustive permutation enumeration
// ---------------------------------------------------------------------------

namespace {

// The cutoff rules, stated over (interview k, relative rank j).
bool rule_accepts(Variant variant, const Strategy& strat, int k, int j) {
    if (strat.kind == StrategyKind::OneThreshold) {
        if (k <= strat.r) return false;
        switch (variant) {
        case Variant::Classic: return j == 1;
        case Variant::BestOrWorst: return j == 1 || j == k;
        case Variant::Postdoc: return j == 2;
        }
        return false;
    }
    // Two thresholds: the relatively-best class opens after r, the second
    // class (worst for Best-or-Worst, second-best for Postdoc) after s.
    if (j == 1 && k > strat.r) return true;
    if (variant == Variant::BestOrWorst) return j == k && k > strat.s;
    return j == 2 && k > strat.s;
}

} // namespace

EvalResult enumerate_permutations(const ProblemSpec& spec, const Strategy& strat) {
    validate(spec, strat);
    const int n = spec.n;
    if (n > kEnumerationMaxN)
        throw StopruleError(ErrorCode::SizeLimit,
                            "enumeration is limited to n <= " + std::to_string(kEnumerationMaxN));

    const PayoffKind kind = spec.payoff.kind;
    const Rat m_exact = rat_from_double(spec.payoff.m);
    const Rat M_exact = rat_from_double(spec.payoff.M);

    long long perms = 1;
    for (int i = 2; i <= n; ++i) perms *= i;

    std::vector<int> ranks(static_cast<size_t>(n)); // ranks[pos], 1 = overall best
    std::iota(ranks.begin(), ranks.end(), 1);

    long long scaled_sum = 0; // binary/cost/perquisite payoffs over denominator n
    Rat unbalanced_sum = rat(0);

    do {
        for (int k = 1; k <= n; ++k) {
            const int rank_k = ranks[static_cast<size_t>(k - 1)];
            int j = 1;
            for (int i = 0; i < k - 1; ++i)
                if (ranks[static_cast<size_t>(i)] < rank_k) ++j;
            if (!rule_accepts(spec.variant, strat, k, j)) continue;

            switch (kind) {
            case PayoffKind::Binary:
            case PayoffKind::Cost:
            case PayoffKind::Perquisite: {
                const bool hit = spec.variant == Variant::Classic ? rank_k == 1
                                 : spec.variant == Variant::Postdoc
                                     ? rank_k == 2
                                     : (rank_k == 1 || rank_k == n);
                if (hit) {
                    if (kind == PayoffKind::Binary) scaled_sum += n;
                    if (kind == PayoffKind::Cost) scaled_sum += n - k;
                    if (kind == PayoffKind::Perquisite) scaled_sum += n + k;
                }
                break;
            }
            case PayoffKind::Unbalanced:
                if (rank_k == 1)
                    unbalanced_sum += M_exact;
                else if (rank_k == n)
                    unbalanced_sum += m_exact;
                break;
            }
            break; // accepted: the process stops
        }
    } while (std::next_permutation(ranks.begin(), ranks.end()));

    Rat mean;
    if (kind == PayoffKind::Unbalanced) {
        mean = unbalanced_sum / rat(perms);
    } else {
        mean = rat(scaled_sum, perms * n);
    }
    return eval_result(mean, Method::Enumeration);
}

// ---------------------------------------------------------------------------

bool recurrence_check_T(int n, int* first_failing_r) {
    if (n < 2) throw StopruleError(ErrorCode::InvalidParameters, "need n >= 2");
    // T_n(n-1) = 1/n; success probability after the r-th interview given a
    // relatively-best pick is already in hand.
    Rat t = rat(1, n);
    if (t != *pd_binary(n, n - 1).exact) {
        if (first_failing_r) *first_failing_r = n - 1;
        return false;
    }
    for (int r = n - 2; r >= 1; --r) {
        const Rat find_now = rat(1, r + 1) * rat(binomial_exact(r + 1, 2), binomial_exact(n, 2));
        t = find_now + rat(r, r + 1) * t;
        if (t != *pd_binary(n, r).exact) {
            if (first_failing_r) *first_failing_r = r;
            return false;
        }
    }
    return true;
}

namespace {

template <class T>
void export_csv_impl(const Policy<T>& policy, std::ostream& out) {
    out << "k,j,decision,value\n";
    const int n = policy.spec.n;
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= k; ++j) {
            const T val = policy.value(k, j);
            out << k << ',' << j << ',' << (policy.accepts(k, j) ? "accept" : "reject") << ',';
            if constexpr (std::is_same_v<T, Rat>) {
                out << to_string(val);
            } else {
                out << val;
            }
            out << '\n';
        }
    }
}

} // namespace

void export_policy_csv(const PolicyQ& policy, std::ostream& out) { export_csv_impl(policy, out); }
void export_policy_csv(const PolicyD& policy, std::ostream& out) { export_csv_impl(policy, out); }

template struct Policy<Rat>;
template struct Policy<double>;

} // namespace stoprule::oracle
