#include "stoprule/model.hpp"

#include <cctype>
#include <charconv>

namespace stoprule {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidCombination: return "InvalidCombination";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConvergenceError: return "ConvergenceError";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NotThreshold: return "NotThreshold";
    }
    return "UnknownError";
}

const char* method_name(Method m) {
    switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::Summation: return "summation";
    case Method::DP: return "dp";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::Enumeration: return "enumeration";
    }
    return "unknown";
}

bool needs_two_thresholds(Variant variant, PayoffKind kind) {
    if (kind == PayoffKind::Unbalanced) return true;
    return variant == Variant::Postdoc && kind == PayoffKind::Cost;
}

std::optional<Violation> check_spec(const ProblemSpec& spec) {
    if (spec.n < 1)
        return Violation{ErrorCode::InvalidParameters, "candidate count n must be >= 1"};
    if (spec.variant == Variant::Postdoc && spec.n < 2)
        return Violation{ErrorCode::InvalidCombination,
                         "Postdoc requires n >= 2 (a second-best candidate must exist)"};
    if (spec.payoff.kind == PayoffKind::Unbalanced) {
        if (spec.variant != Variant::BestOrWorst)
            return Violation{ErrorCode::InvalidCombination,
                             "unbalanced payoff is only defined for the Best-or-Worst variant"};
        if (!(spec.payoff.M > 0.0))
            return Violation{ErrorCode::InvalidParameters, "unbalanced payoff requires M > 0"};
        if (spec.payoff.m < 0.0)
            return Violation{ErrorCode::InvalidParameters, "unbalanced payoff requires m >= 0"};
        // m = M is permitted (it recovers the plain Best-or-Worst problem).
        if (spec.payoff.m > spec.payoff.M)
            return Violation{ErrorCode::InvalidParameters, "unbalanced payoff requires m <= M"};
    }
    return std::nullopt;
}

std::optional<Violation> check(const ProblemSpec& spec, const Strategy& strat) {
    if (auto v = check_spec(spec)) return v;
    const bool two = needs_two_thresholds(spec.variant, spec.payoff.kind);
    if (two && strat.kind != StrategyKind::TwoThreshold)
        return Violation{ErrorCode::InvalidCombination,
                         "this variant/payoff uses a two-threshold strategy (r,s)"};
    if (!two && strat.kind != StrategyKind::OneThreshold)
        return Violation{ErrorCode::InvalidCombination,
                         "this variant/payoff uses a one-threshold strategy (r)"};
    if (strat.r < 0 || strat.r > spec.n - 1)
        return Violation{ErrorCode::InvalidThreshold,
                         "threshold r must satisfy 0 <= r <= n-1"};
    if (strat.kind == StrategyKind::TwoThreshold &&
        (strat.s < strat.r || strat.s > spec.n - 1))
        return Violation{ErrorCode::InvalidThreshold,
                         "threshold s must satisfy r <= s <= n-1"};
    return std::nullopt;
}

void validate_spec(const ProblemSpec& spec) {
    if (auto v = check_spec(spec)) throw StopruleError(v->code, v->message);
}

void validate(const ProblemSpec& spec, const Strategy& strat) {
    if (auto v = check(spec, strat)) throw StopruleError(v->code, v->message);
}

const char* to_string(Variant v) {
    switch (v) {
    case Variant::Classic: return "classic";
    case Variant::BestOrWorst: return "bw";
    case Variant::Postdoc: return "postdoc";
    }
    return "?";
}

const char* to_string(PayoffKind k) {
    switch (k) {
    case PayoffKind::Binary: return "binary";
    case PayoffKind::Cost: return "cost";
    case PayoffKind::Perquisite: return "perq";
    case PayoffKind::Unbalanced: return "unbalanced";
    }
    return "?";
}

std::optional<Variant> parse_variant(const std::string& s) {
    if (s == "classic") return Variant::Classic;
    if (s == "bw" || s == "best-or-worst") return Variant::BestOrWorst;
    if (s == "postdoc") return Variant::Postdoc;
    return std::nullopt;
}

std::optional<PayoffKind> parse_payoff(const std::string& s) {
    if (s == "binary") return PayoffKind::Binary;
    if (s == "cost") return PayoffKind::Cost;
    if (s == "perq" || s == "perquisite") return PayoffKind::Perquisite;
    if (s == "unbalanced") return PayoffKind::Unbalanced;
    return std::nullopt;
}

std::string to_string(const Strategy& strat) {
    std::string out = "r=" + std::to_string(strat.r);
    if (strat.kind == StrategyKind::TwoThreshold) out += ",s=" + std::to_string(strat.s);
    return out;
}

namespace {

std::optional<int> parse_int_field(std::string_view text, std::string_view key) {
    if (text.substr(0, key.size()) != key) return std::nullopt;
    text.remove_prefix(key.size());
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

} // namespace

std::optional<Strategy> parse_strategy(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        if (auto r = parse_int_field(s, "r=")) return Strategy::one(*r);
        return std::nullopt;
    }
    auto r = parse_int_field(std::string_view(s).substr(0, comma), "r=");
    auto t = parse_int_field(std::string_view(s).substr(comma + 1), "s=");
    if (!r || !t) return std::nullopt;
    return Strategy::two(*r, *t);
}

} // namespace stoprule
