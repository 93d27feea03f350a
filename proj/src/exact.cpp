#include "stoprule/exact.hpp"

#include <algorithm>
#include <cmath>

#include "stoprule/detail/scalar.hpp"

namespace stoprule {

namespace {

using detail::Acc;
using detail::from_real;
using detail::ratio;

// Payoff weight p(k) applied on a successful acceptance at interview k.
template <class T>
T payoff_weight(PayoffKind kind, int n, int k) {
    switch (kind) {
    case PayoffKind::Binary: return T(1);
    case PayoffKind::Cost: return ratio<T>(n - k, n);
    case PayoffKind::Perquisite: return ratio<T>(n + k, n);
    case PayoffKind::Unbalanced: break;
    }
    throw StopruleError(ErrorCode::InvalidCombination, "unbalanced payoff has no scalar weight");
}

void require_n(int n, int minimum = 1) {
    if (n < minimum)
        throw StopruleError(ErrorCode::InvalidParameters,
                            "n must be >= " + std::to_string(minimum));
}

void require_r(int n, int r, int r_min) {
    if (r < r_min || r > n - 1)
        throw StopruleError(ErrorCode::InvalidThreshold,
                            "r=" + std::to_string(r) + " outside [" + std::to_string(r_min) +
                                ", n-1] for n=" + std::to_string(n));
}

void require_rs(int n, int r, int s) {
    if (r < 0 || s < r || s > n - 1)
        throw StopruleError(ErrorCode::InvalidThreshold,
                            "need 0 <= r <= s <= n-1, got r=" + std::to_string(r) +
                                " s=" + std::to_string(s) + " n=" + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Kernels. One-threshold values are
//   classic:  (r/n)        * sum_{k=r+1}^n p(k)/(k-1)
//   bw:       2r(r-1)/n    * sum_{k=r+1}^n p(k)/((k-1)(k-2))   for r >= 2
// with the degenerate thresholds accepting candidate r+1 outright.
// ---------------------------------------------------------------------------

template <class T>
T classic_value(int n, int r, PayoffKind kind) {
    if (r == 0) return payoff_weight<T>(kind, n, 1) * ratio<T>(1, n);
    Acc<T> sum;
    for (int k = r + 1; k <= n; ++k)
        sum.add(payoff_weight<T>(kind, n, k) * ratio<T>(1, k - 1));
    return ratio<T>(r, n) * sum.total();
}

template <class T>
T bw_value(int n, int r, PayoffKind kind) {
    if (n == 1) return payoff_weight<T>(kind, n, 1);
    if (r <= 1) {
        // Candidate r+1 is always relatively best or worst; it is the overall
        // best or worst with probability 2/n.
        return payoff_weight<T>(kind, n, r + 1) * ratio<T>(2, n);
    }
    Acc<T> sum;
    for (int k = r + 1; k <= n; ++k)
        sum.add(payoff_weight<T>(kind, n, k) *
                ratio<T>(1, static_cast<long long>(k - 1) * (k - 2)));
    return ratio<T>(2LL * r * (r - 1), n) * sum.total();
}

// Two-threshold rules share one survival recurrence: with only the
// relatively-best class open the current pick survives with (k-1)/k, with
// the wider class open (nice candidates, or relative top two) with (k-2)/k.
// Starting from alive = 1 at k = r+1 this reproduces the reach
// factors r/(k-1) and r(s-1)/((k-1)(k-2)) and stays finite at s = 1.

template <class T>
T bw_unbalanced_value(int n, int r, int s, double m, double M) {
    const T Mt = from_real<T>(M);
    const T mt = from_real<T>(m);
    const T inv_n = ratio<T>(1, n);
    // r = 0 accepts the opening candidate, which is relatively best and
    // relatively worst at once; it pays M or m with probability 1/n each.
    if (r == 0) return (Mt + mt) * inv_n;
    T alive(1);
    Acc<T> sum;
    for (int k = r + 1; k <= n; ++k) {
        if (k <= s) {
            sum.add(alive * Mt * inv_n);
            alive = alive * ratio<T>(k - 1, k);
        } else {
            sum.add(alive * (Mt + mt) * inv_n);
            if (k == 2) break; // everyone is nice at k = 2; accepted for sure
            alive = alive * ratio<T>(k - 2, k);
        }
    }
    return sum.total();
}

template <class T>
T pd_cost_value(int n, int r, int s) {
    // Per-interview success terms, payoff (1 - k/n), target overall rank 2:
    //   stage 2 (j = 1 accepted):      (n-k)^2 / (n^2 (n-1))
    //   stage 3 (j in {1,2} accepted): (n-k)   / n^2
    // r = 0 accepts the opening candidate: (1 - 1/n) times P(overall 2nd).
    if (r == 0) return ratio<T>(n - 1, static_cast<long long>(n) * n);
    T alive(1);
    Acc<T> sum;
    for (int k = r + 1; k <= n; ++k) {
        if (k <= s) {
            sum.add(alive * ratio<T>(static_cast<long long>(n - k) * (n - k),
                                     static_cast<long long>(n) * n * (n - 1)));
            alive = alive * ratio<T>(k - 1, k);
        } else {
            sum.add(alive * ratio<T>(n - k, static_cast<long long>(n) * n));
            if (k == 2) break;
            alive = alive * ratio<T>(k - 2, k);
        }
    }
    return sum.total();
}

EvalResult dispatch_sum(int n, int r, PayoffKind kind, int r_min,
                        Rat (*exact_kernel)(int, int, PayoffKind),
                        double (*float_kernel)(int, int, PayoffKind)) {
    require_n(n);
    require_r(n, r, r_min);
    if (n <= kExactEvalMaxN) return eval_result(exact_kernel(n, r, kind), Method::Summation);
    return eval_result(float_kernel(n, r, kind), Method::Summation);
}

} // namespace

// ---------------------------------------------------------------------------
// Classic secretary problem
// ---------------------------------------------------------------------------

EvalResult classic_binary(int n, int r) {
    return dispatch_sum(n, r, PayoffKind::Binary, 0, classic_value<Rat>, classic_value<double>);
}

EvalResult classic_cost(int n, int r) {
    return dispatch_sum(n, r, PayoffKind::Cost, 0, classic_value<Rat>, classic_value<double>);
}

EvalResult classic_perquisite(int n, int r) {
    return dispatch_sum(n, r, PayoffKind::Perquisite, 0, classic_value<Rat>, classic_value<double>);
}

int gilbert_mosteller_cutoff(int n) {
    require_n(n, 2);
    const long double e = 2.718281828459045235360287471L;
    return static_cast<int>(std::floor((n - 0.5L) / e + 0.5L));
}

// ---------------------------------------------------------------------------
// Best-or-Worst variant
// ---------------------------------------------------------------------------

EvalResult bw_binary(int n, int r) {
    require_n(n);
    require_r(n, r, 0);
    if (n == 1) return eval_result(rat(1), Method::ClosedForm);
    if (r <= 1) return eval_result(rat(2, n), Method::ClosedForm);
    // 2r(n-r)/(n(n-1)); exact at any n.
    Rat value(Int(2) * r * (n - r), Int(n) * (n - 1));
    value.canonicalize();
    return eval_result(value, Method::ClosedForm);
}

EvalResult bw_cost(int n, int r) {
    return dispatch_sum(n, r, PayoffKind::Cost, 0, bw_value<Rat>, bw_value<double>);
}

EvalResult bw_perquisite(int n, int r) {
    return dispatch_sum(n, r, PayoffKind::Perquisite, 0, bw_value<Rat>, bw_value<double>);
}

EvalResult bw_unbalanced(int n, int r, int s, double m, double M) {
    require_n(n, 2);
    require_rs(n, r, s);
    if (m > M || m < 0.0 || !(M > 0.0))
        throw StopruleError(ErrorCode::InvalidParameters, "need 0 <= m <= M, M > 0");
    if (n <= kExactEvalMaxN)
        return eval_result(bw_unbalanced_value<Rat>(n, r, s, m, M), Method::Summation);
    return eval_result(bw_unbalanced_value<double>(n, r, s, m, M), Method::Summation);
}

ArgmaxResult bw_argmax(int n) {
    require_n(n, 3);
    // 2r(n-r)/(n(n-1)) ranks like the integer key r(n-r).
    int best_r = 1;
    long long best_key = 1LL * (n - 1);
    for (int r = 2; r <= n - 1; ++r) {
        const long long key = 1LL * r * (n - r);
        if (key > best_key) {
            best_key = key;
            best_r = r;
        }
    }
    return ArgmaxResult{Strategy::one(best_r), bw_binary(n, best_r), n - 1};
}

// ---------------------------------------------------------------------------
// Postdoc variant
// ---------------------------------------------------------------------------

EvalResult pd_binary(int n, int r) {
    require_n(n, 2);
    require_r(n, r, 1);
    Rat value(Int(r) * (n - r), Int(n) * (n - 1));
    value.canonicalize();
    return eval_result(value, Method::ClosedForm);
}

EvalResult pd_perquisite(int n, int r) {
    require_n(n, 2);
    require_r(n, r, 1);
    Rat value(Int(r) * (n - r) * (3 * Int(n) + 1 + r), Int(2) * n * n * (n - 1));
    value.canonicalize();
    return eval_result(value, Method::ClosedForm);
}

EvalResult pd_cost(int n, int r, int s) {
    require_n(n, 2);
    require_rs(n, r, s);
    if (n <= kExactEvalMaxN)
        return eval_result(pd_cost_value<Rat>(n, r, s), Method::Summation);
    return eval_result(pd_cost_value<double>(n, r, s), Method::Summation);
}

double pd_perquisite_cutoff_exact(int n) {
    require_n(n, 2);
    const double nn = n;
    return (-1.0 - 2.0 * nn + std::sqrt(1.0 + 7.0 * nn + 13.0 * nn * nn)) / 3.0;
}

// ---------------------------------------------------------------------------
// Dispatch and argmax scans
// ---------------------------------------------------------------------------

EvalResult evaluate(const ProblemSpec& spec, const Strategy& strat) {
    validate(spec, strat);
    const int n = spec.n;
    switch (spec.payoff.kind) {
    case PayoffKind::Binary:
        switch (spec.variant) {
        case Variant::Classic: return classic_binary(n, strat.r);
        case Variant::BestOrWorst: return bw_binary(n, strat.r);
        case Variant::Postdoc: return pd_binary(n, strat.r);
        }
        break;
    case PayoffKind::Cost:
        switch (spec.variant) {
        case Variant::Classic: return classic_cost(n, strat.r);
        case Variant::BestOrWorst: return bw_cost(n, strat.r);
        case Variant::Postdoc: return pd_cost(n, strat.r, strat.s);
        }
        break;
    case PayoffKind::Perquisite:
        switch (spec.variant) {
        case Variant::Classic: return classic_perquisite(n, strat.r);
        case Variant::BestOrWorst: return bw_perquisite(n, strat.r);
        case Variant::Postdoc: return pd_perquisite(n, strat.r);
        }
        break;
    case PayoffKind::Unbalanced:
        return bw_unbalanced(n, strat.r, strat.s, spec.payoff.m, spec.payoff.M);
    }
    throw StopruleError(ErrorCode::InvalidCombination, "unsupported spec");
}

int min_threshold(Variant variant, PayoffKind kind) {
    switch (variant) {
    case Variant::Classic: return 0;
    case Variant::BestOrWorst: return kind == PayoffKind::Binary ? 1 : 0;
    case Variant::Postdoc: return 1;
    }
    return 0;
}

namespace {

// One pass over r (descending) with suffix accumulation; O(n) per curve.
template <class T>
std::vector<T> curve_impl(const ProblemSpec& spec) {
    const int n = spec.n;
    const PayoffKind kind = spec.payoff.kind;
    const int r_min = std::min(min_threshold(spec.variant, kind), n - 1);
    std::vector<T> values(static_cast<size_t>(n - r_min));
    auto at = [&](int r) -> T& { return values[static_cast<size_t>(r - r_min)]; };

    switch (spec.variant) {
    case Variant::Classic: {
        Acc<T> sum;
        for (int r = n - 1; r >= 1; --r) {
            sum.add(payoff_weight<T>(kind, n, r + 1) * ratio<T>(1, r));
            at(r) = ratio<T>(r, n) * sum.total();
        }
        if (r_min == 0) at(0) = payoff_weight<T>(kind, n, 1) * ratio<T>(1, n);
        break;
    }
    case Variant::BestOrWorst: {
        if (n == 1) {
            at(0) = payoff_weight<T>(kind, n, 1);
            break;
        }
        Acc<T> sum;
        for (int r = n - 1; r >= 2; --r) {
            sum.add(payoff_weight<T>(kind, n, r + 1) * ratio<T>(1, 1LL * r * (r - 1)));
            at(r) = ratio<T>(2LL * r * (r - 1), n) * sum.total();
        }
        for (int r = std::min(1, n - 1); r >= r_min; --r)
            at(r) = payoff_weight<T>(kind, n, r + 1) * ratio<T>(2, n);
        break;
    }
    case Variant::Postdoc: {
        for (int r = 1; r <= n - 1; ++r) {
            if (kind == PayoffKind::Binary) {
                at(r) = ratio<T>(1LL * r * (n - r), 1LL * n * (n - 1));
            } else if (kind == PayoffKind::Perquisite) {
                at(r) = ratio<T>(1LL * r * (n - r), 2LL * n * (n - 1)) *
                        ratio<T>(3LL * n + 1 + r, n);
            } else {
                throw StopruleError(ErrorCode::InvalidCombination,
                                    "Postdoc cost uses the two-threshold scan");
            }
        }
        break;
    }
    }
    return values;
}

template <class T>
ArgmaxResult scan_one(const ProblemSpec& spec) {
    const int n = spec.n;
    const int r_min = std::min(min_threshold(spec.variant, spec.payoff.kind), n - 1);
    const std::vector<T> curve = curve_impl<T>(spec);
    int best_r = r_min;
    for (int r = r_min + 1; r <= n - 1; ++r)
        if (curve[static_cast<size_t>(r - r_min)] > curve[static_cast<size_t>(best_r - r_min)])
            best_r = r;
    return ArgmaxResult{Strategy::one(best_r),
                        evaluate(spec, Strategy::one(best_r)),
                        n - r_min};
}

// O(1) grid cells for the two-threshold scans, from prefix/suffix arrays.

struct UnbalancedGrid {
    int n;
    double m, M;
    std::vector<double> harmonic; // harmonic[t] = sum_{i=1}^t 1/i

    explicit UnbalancedGrid(const ProblemSpec& spec)
        : n(spec.n), m(spec.payoff.m), M(spec.payoff.M), harmonic(static_cast<size_t>(n) + 1) {
        Acc<double> h;
        harmonic[0] = 0.0;
        for (int t = 1; t <= n; ++t) {
            h.add(1.0 / t);
            harmonic[static_cast<size_t>(t)] = h.total();
        }
    }

    double eval(int r, int s) const {
        if (r == 0) return (M + m) / n;
        const double lead = static_cast<double>(r) / n;
        const double stage2 = M * lead * (harmonic[static_cast<size_t>(s - 1)] -
                                          harmonic[static_cast<size_t>(r - 1)]);
        const double stage3 = (M + m) * lead * (1.0 - static_cast<double>(s - 1) / (n - 1));
        return stage2 + stage3;
    }
};

struct PdCostGrid {
    int n;
    std::vector<double> prefix_sq; // prefix_sq[t] = sum_{k=2}^t (n-k)^2/(k-1)
    std::vector<double> suffix;    // suffix[t]    = sum_{k=t}^n (n-k)/((k-1)(k-2))

    explicit PdCostGrid(const ProblemSpec& spec)
        : n(spec.n),
          prefix_sq(static_cast<size_t>(n) + 1, 0.0),
          suffix(static_cast<size_t>(n) + 2, 0.0) {
        Acc<double> a;
        for (int k = 2; k <= n; ++k) {
            a.add(static_cast<double>(n - k) * (n - k) / (k - 1));
            prefix_sq[static_cast<size_t>(k)] = a.total();
        }
        Acc<double> b;
        for (int k = n; k >= 3; --k) {
            b.add(static_cast<double>(n - k) / (static_cast<double>(k - 1) * (k - 2)));
            suffix[static_cast<size_t>(k)] = b.total();
        }
    }

    double eval(int r, int s) const {
        const double nn = n;
        if (r == 0) return (nn - 1.0) / (nn * nn); // opening candidate accepted
        if (s == 1) // r = 1: candidate 2 is accepted for sure
            return (nn - 2.0) / (nn * nn);
        const double stage2 = static_cast<double>(r) / (nn * nn * (nn - 1.0)) *
                              (prefix_sq[static_cast<size_t>(s)] - prefix_sq[static_cast<size_t>(r)]);
        const double stage3 =
            static_cast<double>(r) * (s - 1) / (nn * nn) * suffix[static_cast<size_t>(s + 1)];
        return stage2 + stage3;
    }
};

template <class Grid>
void scan_grid(const Grid& grid, int r_lo, int r_hi, int s_lo, int s_hi, int n, int& best_r,
               int& best_s, double& best_v, std::int64_t& scanned) {
    r_lo = std::max(r_lo, 0);
    r_hi = std::min(r_hi, n - 1);
    s_hi = std::min(s_hi, n - 1);
    for (int r = r_lo; r <= r_hi; ++r) {
        for (int s = std::max(r, s_lo); s <= s_hi; ++s) {
            const double v = grid.eval(r, s);
            ++scanned;
            if (v > best_v) {
                best_v = v;
                best_r = r;
                best_s = s;
            }
        }
    }
}

template <class Grid>
ArgmaxResult scan_two(const ProblemSpec& spec, bool force_full_scan) {
    const int n = spec.n;
    const Grid grid(spec);
    int best_r = 0, best_s = 0;
    double best_v = grid.eval(0, 0);
    std::int64_t scanned = 1;

    // Every (0, s) strategy accepts the opening candidate, so the (0, 0)
    // seed stands in for the whole r = 0 column.
    if (force_full_scan || n <= 2000) {
        scan_grid(grid, 1, n - 1, 0, n - 1, n, best_r, best_s, best_v, scanned);
    } else {
        // Coarse-to-fine heuristic: stride ceil(n/1000), then a full rescan of
        // the +-stride window around the coarse optimum.
        const int stride = (n + 999) / 1000;
        for (int r = 1; r <= n - 1; r += stride) {
            for (int s = r; s <= n - 1; s += stride) {
                const double v = grid.eval(r, s);
                ++scanned;
                if (v > best_v) {
                    best_v = v;
                    best_r = r;
                    best_s = s;
                }
            }
        }
        scan_grid(grid, best_r - stride, best_r + stride, best_s - stride, best_s + stride, n,
                  best_r, best_s, best_v, scanned);
    }

    const Strategy best = Strategy::two(best_r, best_s);
    return ArgmaxResult{best, evaluate(spec, best), scanned};
}

} // namespace

ArgmaxResult argmax_one(const ProblemSpec& spec) {
    validate_spec(spec);
    if (needs_two_thresholds(spec.variant, spec.payoff.kind))
        throw StopruleError(ErrorCode::InvalidCombination,
                            "use argmax_two for Unbalanced and Postdoc-cost specs");
    if (spec.variant == Variant::BestOrWorst && spec.payoff.kind == PayoffKind::Binary) {
        if (spec.n <= 2) // degenerate cases: accept the first candidate (value 1)
            return ArgmaxResult{Strategy::one(0), bw_binary(spec.n, 0), 1};
        return bw_argmax(spec.n);
    }
    if (spec.n <= kExactEvalMaxN) return scan_one<Rat>(spec);
    return scan_one<double>(spec);
}

ArgmaxResult argmax_two(const ProblemSpec& spec, bool force_full_scan) {
    validate_spec(spec);
    if (!needs_two_thresholds(spec.variant, spec.payoff.kind))
        throw StopruleError(ErrorCode::InvalidCombination,
                            "argmax_two only applies to Unbalanced and Postdoc-cost specs");
    if (spec.n < 2)
        throw StopruleError(ErrorCode::InvalidParameters, "two-threshold scan needs n >= 2");
    if (spec.payoff.kind == PayoffKind::Unbalanced)
        return scan_two<UnbalancedGrid>(spec, force_full_scan);
    return scan_two<PdCostGrid>(spec, force_full_scan);
}

ArgmaxResult optimize(const ProblemSpec& spec, bool force_full_scan) {
    if (needs_two_thresholds(spec.variant, spec.payoff.kind))
        return argmax_two(spec, force_full_scan);
    return argmax_one(spec);
}

std::vector<double> one_threshold_curve(const ProblemSpec& spec) {
    validate_spec(spec);
    if (needs_two_thresholds(spec.variant, spec.payoff.kind))
        throw StopruleError(ErrorCode::InvalidCombination,
                            "no one-threshold curve for two-threshold families");
    return curve_impl<double>(spec);
}

namespace detail {

double classic_value_d(int n, int r, PayoffKind kind) { return classic_value<double>(n, r, kind); }
double bw_value_d(int n, int r, PayoffKind kind) { return bw_value<double>(n, r, kind); }

double pd_value_d(int n, int r, PayoffKind kind) {
    if (kind == PayoffKind::Binary)
        return static_cast<double>(r) * (n - r) / (static_cast<double>(n) * (n - 1));
    if (kind == PayoffKind::Perquisite)
        return static_cast<double>(r) * (n - r) * (3.0 * n + 1 + r) /
               (2.0 * n * n * (n - 1));
    throw StopruleError(ErrorCode::InvalidCombination, "use pd_cost_d for the cost payoff");
}

double bw_unbalanced_d(int n, int r, int s, double m, double M) {
    return bw_unbalanced_value<double>(n, r, s, m, M);
}

double pd_cost_d(int n, int r, int s) { return pd_cost_value<double>(n, r, s); }

} // namespace detail

} // namespace stoprule
