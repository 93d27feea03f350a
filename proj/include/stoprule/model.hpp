#pragma once

#include <optional>
#include <string>

#include "stoprule/errors.hpp"
#include "stoprule/rational.hpp"

namespace stoprule {

// ============================================================================
// Domain types shared by all modules. Immutable value objects.
// ============================================================================

enum class Variant { Classic, BestOrWorst, Postdoc };

enum class PayoffKind { Binary, Cost, Perquisite, Unbalanced };

// Payoff on accepting the k-th candidate, provided it is the target:
//   Binary      1
//   Cost        1 - k/n
//   Perquisite  1 + k/n
//   Unbalanced  M if overall best, m if overall worst (Best-or-Worst only)
struct PayoffRegime {
    PayoffKind kind = PayoffKind::Binary;
    double m = 0.0; // Unbalanced only
    double M = 1.0; // Unbalanced only

    static PayoffRegime binary() { return {PayoffKind::Binary, 0.0, 1.0}; }
    static PayoffRegime cost() { return {PayoffKind::Cost, 0.0, 1.0}; }
    static PayoffRegime perquisite() { return {PayoffKind::Perquisite, 0.0, 1.0}; }
    static PayoffRegime unbalanced(double m, double M) { return {PayoffKind::Unbalanced, m, M}; }
};

struct ProblemSpec {
    Variant variant = Variant::Classic;
    PayoffRegime payoff = PayoffRegime::binary();
    int n = 1; // number of candidates
};

enum class StrategyKind { OneThreshold, TwoThreshold };

// Cutoff rule. OneThreshold{r}: reject the first r candidates, then accept
// the first eligible one (eligibility depends on the variant). TwoThreshold
// {r,s}: the relatively-best class is accepted from interview r+1 on, the
// second class (relatively-worst for Unbalanced, relatively-second-best for
// Postdoc/Cost) from interview s+1 on.
struct Strategy {
    StrategyKind kind = StrategyKind::OneThreshold;
    int r = 0;
    int s = 0;

    static Strategy one(int r) { return {StrategyKind::OneThreshold, r, r}; }
    static Strategy two(int r, int s) { return {StrategyKind::TwoThreshold, r, s}; }

    friend bool operator==(const Strategy& a, const Strategy& b) {
        if (a.kind != b.kind || a.r != b.r) return false;
        return a.kind == StrategyKind::OneThreshold || a.s == b.s;
    }
};

enum class Method { ClosedForm, Summation, DP, MonteCarlo, Enumeration };

const char* method_name(Method m);

struct EvalResult {
    double value = 0.0;
    std::optional<Rat> exact; // present when computed with exact rationals
    Method method = Method::Summation;
};

inline EvalResult eval_result(const Rat& q, Method m) {
    return EvalResult{to_double(q), q, m};
}

inline EvalResult eval_result(double v, Method m) {
    return EvalResult{v, std::nullopt, m};
}

// ============================================================================
// Validation
// ============================================================================

struct Violation {
    ErrorCode code;
    std::string message;
};

// Two-threshold families: Unbalanced and Postdoc with the cost payoff.
bool needs_two_thresholds(Variant variant, PayoffKind kind);

std::optional<Violation> check_spec(const ProblemSpec& spec);
std::optional<Violation> check(const ProblemSpec& spec, const Strategy& strat);

// Throwing flavors of the checks above.
void validate_spec(const ProblemSpec& spec);
void validate(const ProblemSpec& spec, const Strategy& strat);

// ============================================================================
// Textual forms
// ============================================================================

const char* to_string(Variant v);
const char* to_string(PayoffKind k);
std::optional<Variant> parse_variant(const std::string& s);
std::optional<PayoffKind> parse_payoff(const std::string& s);

// Canonical strategy form: "r=<int>" or "r=<int>,s=<int>".
std::string to_string(const Strategy& strat);
std::optional<Strategy> parse_strategy(const std::string& s);

} // namespace stoprule
