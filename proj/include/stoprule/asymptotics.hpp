#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stoprule/model.hpp"

namespace stoprule::asym {

// ============================================================================
// Lambert W (real branches) and the digamma function.
// ============================================================================

// Principal branch W0 on [-1/e, inf): w >= -1 with w e^w = x.
double lambert_w0(double x);

// Lower branch W-1 on [-1/e, 0): w <= -1 with w e^w = x.
double lambert_wm1(double x);

// psi(x) for x > 0; psi(n) = H_{n-1} - gamma at integers.
double digamma(double x);

// Bracketed bisection with a Newton polish. f(lo) and f(hi) must have
// opposite signs; throws ConvergenceError otherwise.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi);

// Bisection only (no polish); the independent second route for constants
// that have no Lambert-W closed form.
double solve_bisection_only(const std::function<double(double)>& f, double lo, double hi);

// ============================================================================
// Asymptotic constants. Each has a Lambert-W (or algebraic) closed form and
// an independent root-solved route; value() returns the closed form.
// ============================================================================

struct Constant {
    std::string name;
    double value = 0.0;             // closed-form route
    double root_value = 0.0;        // bracketed root route
    std::string defining_equation;
    double residual = 0.0;          // |equation at value|
    double limit_payoff = 0.0;      // AMP of the matching variant/payoff
};

double rho();          // -W(-2 e^-2)/2        classic, cost
double mu();           // W(2)/2               classic, perquisite (eta in some tables)
double theta();        // -1/(2 W-1(-1/(2 sqrt e)))   best-or-worst, cost
double vartheta();     // 1/(2 W(e^{3/2}/2))   best-or-worst, perquisite
double pd_perq_acv();  // (sqrt 13 - 2)/3      postdoc, perquisite

// (alpha, beta) for the two-threshold postdoc cost problem: beta solves
// -2 + 1/b + b + log b = 0, then alpha solves
// 1 - 1/b - 2b - b^2/2 + 4a - 3a^2/2 - log a = 0.
std::pair<double, double> solve_pd_cost_constants();

// All named constants with residuals and limit payoffs.
std::vector<Constant> constants();

// ============================================================================
// Limit profiles g(x) (one threshold) and h(x, y) (two thresholds): the
// uniform limits of the scaled payoff curves E_n(n x). Value 0 at x = 0.
// ============================================================================

double scaled_profile(Variant variant, PayoffKind kind, double x);
double scaled_profile2(Variant variant, PayoffKind kind, double x, double y, double m = 0.0,
                       double M = 1.0);

// One cell of the asymptotic comparison grid: the limiting cutoff ratio(s)
// and the limiting maximum expected payoff.
struct AsymptoticCell {
    PayoffKind payoff;
    Variant variant;
    std::vector<double> acv; // one entry, or (alpha, beta) for postdoc cost
    double amp = 0.0;
};

// The full 3x3 grid (payoff in {binary, cost, perquisite} x variant).
std::vector<AsymptoticCell> asymptotic_table();

} // namespace stoprule::asym
