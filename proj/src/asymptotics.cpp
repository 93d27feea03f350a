#include "stoprule/asymptotics.hpp"

#include <cmath>
#include <limits>

namespace stoprule::asym {

namespace {

constexpr double kE = 2.718281828459045235360287471;
constexpr double kInvE = 0.36787944117144232159552377016;

double halley_refine(double x, double w) {
    // Halley iteration on f(w) = w e^w - x; tolerance 1e-14, max 50 steps.
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        if (denom == 0.0 || !std::isfinite(denom)) break;
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
    }
    return w;
}

void check_residual(double x, double w) {
    const double res = std::abs(w * std::exp(w) - x);
    if (res > 1e-12 * std::max(1.0, std::abs(x)))
        throw StopruleError(ErrorCode::ConvergenceError,
                            "Lambert W residual " + std::to_string(res));
}

} // namespace

double lambert_w0(double x) {
    if (x < -kInvE) {
        if (x < -kInvE - 1e-15)
            throw StopruleError(ErrorCode::DomainError, "lambert_w0 needs x >= -1/e");
        x = -kInvE;
    }
    if (x == 0.0) return 0.0;

    double w;
    if (x < -0.25) {
        // Branch-point series in p = sqrt(2(1 + e x)).
        const double p = std::sqrt(std::max(0.0, 2.0 * (1.0 + kE * x)));
        if (p == 0.0) return -1.0;
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 1.0) {
        w = x * (1.0 + x * (-1.0 + x * (1.5 - 8.0 / 3.0 * x)));
    } else if (x < 4.0) {
        w = std::log(1.0 + x); // crude but inside Halley's basin here
    } else {
        const double l = std::log(x);
        const double ll = std::log(l);
        w = l - ll + ll / l;
    }
    w = halley_refine(x, w);
    check_residual(x, w);
    return w;
}

double lambert_wm1(double x) {
    if (x >= 0.0)
        throw StopruleError(ErrorCode::DomainError, "lambert_wm1 needs x < 0");
    if (x < -kInvE) {
        if (x < -kInvE - 1e-15)
            throw StopruleError(ErrorCode::DomainError, "lambert_wm1 needs x >= -1/e");
        x = -kInvE;
    }

    double w;
    const double p2 = 2.0 * (1.0 + kE * x);
    if (p2 <= 0.0) return -1.0;
    if (x < -0.27) {
        const double p = std::sqrt(p2);
        w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
    } else {
        // x in (-0.27, 0): w ~ log(-x) - log(-log(-x)).
        const double l = std::log(-x);
        w = l - std::log(-l);
    }
    w = halley_refine(x, w);
    if (w > -1.0 + 1e-9)
        throw StopruleError(ErrorCode::ConvergenceError, "lambert_wm1 left its branch");
    check_residual(x, w);
    return w;
}

double digamma(double x) {
    if (!(x > 0.0))
        throw StopruleError(ErrorCode::DomainError, "digamma needs x > 0");
    double acc = 0.0;
    while (x < 10.0) { // psi(x) = psi(x+1) - 1/x
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series: log x - 1/(2x) - sum B_2k/(2k x^2k).
    const double z = 1.0 / (x * x);
    const double series = z * (1.0 / 12.0 +
                               z * (-1.0 / 120.0 +
                                    z * (1.0 / 252.0 +
                                         z * (-1.0 / 240.0 +
                                              z * (1.0 / 132.0 +
                                                   z * (-691.0 / 32760.0 + z / 12.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double solve_bisection_only(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw StopruleError(ErrorCode::ConvergenceError, "root not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi) {
    double x = solve_bisection_only(f, lo, hi);
    for (int it = 0; it < 8; ++it) { // Newton polish, kept inside the bracket
        const double d = df(x);
        if (d == 0.0) break;
        const double next = x - f(x) / d;
        if (!(next >= lo && next <= hi)) break;
        if (next == x) break;
        x = next;
    }
    return x;
}

namespace {

struct ConstantDef {
    const char* name;
    double closed_form;
    const char* equation_text;
    std::function<double(double)> equation;
    std::function<double(double)> derivative;
    double bracket_lo, bracket_hi;
    Variant variant;
    PayoffKind payoff;
};

const std::vector<ConstantDef>& constant_defs() {
    static const std::vector<ConstantDef> defs = [] {
        std::vector<ConstantDef> d;
        d.push_back({"rho", -0.5 * lambert_w0(-2.0 * std::exp(-2.0)),
                     "2x - 2 - log(x) = 0",
                     [](double x) { return 2.0 * x - 2.0 - std::log(x); },
                     [](double x) { return 2.0 - 1.0 / x; }, 0.10318, 0.30318,
                     Variant::Classic, PayoffKind::Cost});
        d.push_back({"mu", 0.5 * lambert_w0(2.0),
                     "2x + log(x) = 0",
                     [](double x) { return 2.0 * x + std::log(x); },
                     [](double x) { return 2.0 + 1.0 / x; }, 0.32630, 0.52630,
                     Variant::Classic, PayoffKind::Perquisite});
        d.push_back({"theta", -1.0 / (2.0 * lambert_wm1(-0.5 * std::exp(-0.5))),
                     "2x log(x) - x + 1 = 0",
                     [](double x) { return 2.0 * x * std::log(x) - x + 1.0; },
                     [](double x) { return 2.0 * std::log(x) + 1.0; }, 0.184668, 0.384668,
                     Variant::BestOrWorst, PayoffKind::Cost});
        d.push_back({"vartheta", 1.0 / (2.0 * lambert_w0(0.5 * std::exp(1.5))),
                     "1 - 3x - 2x log(x) = 0",
                     [](double x) { return 1.0 - 3.0 * x - 2.0 * x * std::log(x); },
                     [](double x) { return -5.0 - 2.0 * std::log(x); }, 0.452001, 0.652001,
                     Variant::BestOrWorst, PayoffKind::Perquisite});
        d.push_back({"pd_perq_acv", (std::sqrt(13.0) - 2.0) / 3.0,
                     "3x^2 + 4x - 3 = 0",
                     [](double x) { return 3.0 * x * x + 4.0 * x - 3.0; },
                     [](double x) { return 6.0 * x + 4.0; }, 0.43518, 0.63518,
                     Variant::Postdoc, PayoffKind::Perquisite});
        return d;
    }();
    return defs;
}

double constant_by_name(const char* name) {
    for (const auto& def : constant_defs())
        if (def.name == std::string_view(name)) return def.closed_form;
    throw StopruleError(ErrorCode::InvalidParameters, "unknown constant");
}

} // namespace

double rho() { return constant_by_name("rho"); }
double mu() { return constant_by_name("mu"); }
double theta() { return constant_by_name("theta"); }
double vartheta() { return constant_by_name("vartheta"); }
double pd_perq_acv() { return constant_by_name("pd_perq_acv"); }

std::pair<double, double> solve_pd_cost_constants() {
    const auto beta_eq = [](double b) { return -2.0 + 1.0 / b + b + std::log(b); };
    const auto beta_d = [](double b) { return -1.0 / (b * b) + 1.0 + 1.0 / b; };
    const double beta = solve_bracketed(beta_eq, beta_d, 0.29422, 0.49422);

    const double c = 1.0 - 1.0 / beta - 2.0 * beta - beta * beta / 2.0;
    const auto alpha_eq = [c](double a) { return c + 4.0 * a - 1.5 * a * a - std::log(a); };
    const auto alpha_d = [](double a) { return 4.0 - 3.0 * a - 1.0 / a; };
    const double alpha = solve_bracketed(alpha_eq, alpha_d, 0.07248, 0.27248);
    return {alpha, beta};
}

std::vector<Constant> constants() {
    std::vector<Constant> out;
    for (const auto& def : constant_defs()) {
        Constant c;
        c.name = def.name;
        c.value = def.closed_form;
        c.root_value = solve_bracketed(def.equation, def.derivative, def.bracket_lo, def.bracket_hi);
        c.defining_equation = def.equation_text;
        c.residual = std::abs(def.equation(c.value));
        c.limit_payoff = scaled_profile(def.variant, def.payoff, c.value);
        out.push_back(std::move(c));
    }
    const auto [alpha, beta] = solve_pd_cost_constants();
    const double amp = scaled_profile2(Variant::Postdoc, PayoffKind::Cost, alpha, beta);
    Constant cb{"beta", beta, beta, "-2 + 1/x + x + log(x) = 0",
                std::abs(-2.0 + 1.0 / beta + beta + std::log(beta)), amp};
    Constant ca{"alpha", alpha, alpha,
                "1 - 1/beta - 2 beta - beta^2/2 + 4x - 3x^2/2 - log(x) = 0",
                std::abs(1.0 - 1.0 / beta - 2.0 * beta - beta * beta / 2.0 + 4.0 * alpha -
                         1.5 * alpha * alpha - std::log(alpha)),
                amp};
    out.push_back(std::move(ca));
    out.push_back(std::move(cb));
    return out;
}

double scaled_profile(Variant variant, PayoffKind kind, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw StopruleError(ErrorCode::DomainError, "profile needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    const double lx = std::log(x);
    switch (variant) {
    case Variant::Classic:
        switch (kind) {
        case PayoffKind::Binary: return -x * lx;
        case PayoffKind::Cost: return x * (-1.0 + x - lx);
        case PayoffKind::Perquisite: return -x * (-1.0 + x + lx);
        default: break;
        }
        break;
    case Variant::BestOrWorst:
        switch (kind) {
        case PayoffKind::Binary: return 2.0 * x * (1.0 - x);
        case PayoffKind::Cost: return 2.0 * x * (1.0 - x + x * lx);
        case PayoffKind::Perquisite: return -2.0 * x * (-1.0 + x + x * lx);
        default: break;
        }
        break;
    case Variant::Postdoc:
        switch (kind) {
        case PayoffKind::Binary: return x * (1.0 - x);
        case PayoffKind::Perquisite: return x * (1.0 - x) * (3.0 + x) / 2.0;
        default: break;
        }
        break;
    }
    throw StopruleError(ErrorCode::InvalidCombination,
                        "this variant/payoff has a two-variable profile");
}

double scaled_profile2(Variant variant, PayoffKind kind, double x, double y, double m, double M) {
    if (!(x >= 0.0 && y >= x && y <= 1.0))
        throw StopruleError(ErrorCode::DomainError, "profile needs 0 <= x <= y <= 1");
    if (x == 0.0) return 0.0;
    if (variant == Variant::BestOrWorst && kind == PayoffKind::Unbalanced)
        return (M + m) * x - (M + m) * x * y + M * x * std::log(y / x);
    if (variant == Variant::Postdoc && kind == PayoffKind::Cost)
        return x *
               (2.0 - 6.0 * y + y * y + 4.0 * x - x * x + 2.0 * (1.0 + y) * std::log(y) -
                2.0 * std::log(x)) /
               2.0;
    throw StopruleError(ErrorCode::InvalidCombination,
                        "this variant/payoff has a one-variable profile");
}

std::vector<AsymptoticCell> asymptotic_table() {
    std::vector<AsymptoticCell> cells;
    const auto [alpha, beta] = solve_pd_cost_constants();
    const auto one = [&](PayoffKind p, Variant v, double acv) {
        cells.push_back({p, v, {acv}, scaled_profile(v, p, acv)});
    };
    one(PayoffKind::Binary, Variant::Classic, kInvE);
    one(PayoffKind::Binary, Variant::BestOrWorst, 0.5);
    one(PayoffKind::Binary, Variant::Postdoc, 0.5);
    one(PayoffKind::Cost, Variant::Classic, rho());
    one(PayoffKind::Cost, Variant::BestOrWorst, theta());
    cells.push_back({PayoffKind::Cost, Variant::Postdoc, {alpha, beta},
                     scaled_profile2(Variant::Postdoc, PayoffKind::Cost, alpha, beta)});
    one(PayoffKind::Perquisite, Variant::Classic, mu());
    one(PayoffKind::Perquisite, Variant::BestOrWorst, vartheta());
    one(PayoffKind::Perquisite, Variant::Postdoc, pd_perq_acv());
    return cells;
}

} // namespace stoprule::asym
