// stoprule: exact values, optimal cutoffs, asymptotic constants, Monte Carlo
// estimates and a DP oracle for the secretary problem and its Best-or-Worst
// and Postdoc variants.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "stoprule/asymptotics.hpp"
#include "stoprule/exact.hpp"
#include "stoprule/montecarlo.hpp"
#include "stoprule/oracle.hpp"

using nlohmann::json;
using namespace stoprule;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNotThreshold = 3;

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string exact_str(const EvalResult& res) {
    return res.exact ? to_string(*res.exact) : std::string();
}

struct SpecFlags {
    std::string variant = "classic";
    std::string payoff = "binary";
    int n = 0;
    double m = 0.0;
    double M = 1.0;

    void attach(CLI::App* cmd, bool with_mM = true) {
        cmd->add_option("--variant", variant, "classic | bw | postdoc")->required();
        cmd->add_option("--payoff", payoff, "binary | cost | perq | unbalanced")->required();
        cmd->add_option("--n", n, "number of candidates")->required();
        if (with_mM) {
            cmd->add_option("--m", m, "unbalanced payoff for the worst candidate");
            cmd->add_option("--M", M, "unbalanced payoff for the best candidate");
        }
    }

    ProblemSpec build() const {
        const auto v = parse_variant(variant);
        if (!v) throw StopruleError(ErrorCode::InvalidParameters, "unknown variant: " + variant);
        const auto p = parse_payoff(payoff);
        if (!p) throw StopruleError(ErrorCode::InvalidParameters, "unknown payoff: " + payoff);
        ProblemSpec spec;
        spec.variant = *v;
        spec.n = n;
        spec.payoff = *p == PayoffKind::Unbalanced ? PayoffRegime::unbalanced(m, M)
                                                   : PayoffRegime{*p, 0.0, 1.0};
        return spec;
    }
};

json spec_json(const ProblemSpec& spec) {
    json j{{"variant", to_string(spec.variant)},
           {"payoff", to_string(spec.payoff.kind)},
           {"n", spec.n}};
    if (spec.payoff.kind == PayoffKind::Unbalanced) {
        j["m"] = spec.payoff.m;
        j["M"] = spec.payoff.M;
    }
    return j;
}

void print_result_csv(const ProblemSpec& spec, const Strategy& strat, const EvalResult& res) {
    std::cout << "variant,payoff,n,r,s,value,exact,method\n"
              << to_string(spec.variant) << ',' << to_string(spec.payoff.kind) << ',' << spec.n
              << ',' << strat.r << ','
              << (strat.kind == StrategyKind::TwoThreshold ? std::to_string(strat.s) : "") << ','
              << fmt6(res.value) << ',' << exact_str(res) << ',' << method_name(res.method)
              << '\n';
}

void print_result_md(const ProblemSpec& spec, const Strategy& strat, const EvalResult& res) {
    std::cout << "| variant | payoff | n | strategy | value | exact | method |\n"
              << "|---|---|---|---|---|---|---|\n"
              << "| " << to_string(spec.variant) << " | " << to_string(spec.payoff.kind) << " | "
              << spec.n << " | " << to_string(strat) << " | " << fmt6(res.value) << " | "
              << exact_str(res) << " | " << method_name(res.method) << " |\n";
}

int cmd_evaluate(const SpecFlags& flags, int r, std::optional<int> s, const std::string& format) {
    const ProblemSpec spec = flags.build();
    const Strategy strat = s ? Strategy::two(r, *s) : Strategy::one(r);
    const EvalResult res = evaluate(spec, strat);
    if (format == "json") {
        json j = spec_json(spec);
        j["schema"] = "v1";
        j["command"] = "evaluate";
        j["strategy"] = to_string(strat);
        j["value"] = res.value;
        j["exact"] = exact_str(res);
        j["method"] = method_name(res.method);
        std::cout << j.dump() << '\n';
    } else if (format == "csv") {
        print_result_csv(spec, strat, res);
    } else {
        print_result_md(spec, strat, res);
    }
    return 0;
}

int cmd_optimize(const SpecFlags& flags, bool full_scan, const std::string& format) {
    const ProblemSpec spec = flags.build();
    const ArgmaxResult best = optimize(spec, full_scan);
    if (format == "json") {
        json j = spec_json(spec);
        j["schema"] = "v1";
        j["command"] = "optimize";
        j["strategy"] = to_string(best.best_strategy);
        j["r"] = best.best_strategy.r;
        if (best.best_strategy.kind == StrategyKind::TwoThreshold) j["s"] = best.best_strategy.s;
        j["value"] = best.best_value.value;
        j["exact"] = exact_str(best.best_value);
        j["method"] = method_name(best.best_value.method);
        j["scanned"] = best.scanned;
        j["full_scan"] = full_scan;
        std::cout << j.dump() << '\n';
    } else if (format == "csv") {
        print_result_csv(spec, best.best_strategy, best.best_value);
    } else {
        print_result_md(spec, best.best_strategy, best.best_value);
        std::cout << "\nscanned " << best.scanned << " strategies\n";
    }
    return 0;
}

int cmd_simulate(const SpecFlags& flags, int r, std::optional<int> s, std::uint64_t samples,
                 std::uint64_t seed, int workers) {
    const ProblemSpec spec = flags.build();
    const Strategy strat = s ? Strategy::two(r, *s) : Strategy::one(r);
    const mc::SimReport report = mc::estimate(spec, strat, samples, seed, workers);
    json j = spec_json(spec);
    j["schema"] = "v1";
    j["command"] = "simulate";
    j["strategy"] = to_string(strat);
    j.update(json::parse(mc::to_json_string(report)));
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_oracle(const SpecFlags& flags, const std::string& export_path, const std::string& format) {
    const ProblemSpec spec = flags.build();
    validate_spec(spec);

    double root = 0.0;
    std::string root_exact;
    oracle::ThresholdCheck check;
    if (spec.n <= oracle::kDpExactMaxN) {
        const auto policy = oracle::dp_solve_exact(spec);
        root = to_double(policy.root_value());
        root_exact = to_string(policy.root_value());
        check = oracle::extract_thresholds(policy);
        if (!export_path.empty()) {
            std::ofstream out(export_path);
            oracle::export_policy_csv(policy, out);
        }
    } else {
        const auto policy = oracle::dp_solve(spec);
        root = policy.root_value();
        check = oracle::extract_thresholds(policy);
        if (!export_path.empty()) {
            std::ofstream out(export_path);
            oracle::export_policy_csv(policy, out);
        }
    }

    if (format == "json") {
        json j = spec_json(spec);
        j["schema"] = "v1";
        j["command"] = "oracle";
        j["root_value"] = root;
        j["root_exact"] = root_exact;
        j["thresholds"] = to_string(check.strategy);
        j["structure"] = check.ok ? "PASS" : "FAIL";
        json devs = json::array();
        for (const auto& d : check.counterexamples)
            devs.push_back({{"k", d.k}, {"j", d.j}, {"note", d.note}});
        j["counterexamples"] = devs;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "root value: " << fmt6(root);
        if (!root_exact.empty()) std::cout << " (" << root_exact << ")";
        std::cout << "\nthresholds: " << to_string(check.strategy) << '\n'
                  << "structure: " << (check.ok ? "PASS" : "FAIL") << '\n';
        for (const auto& d : check.counterexamples)
            std::cout << "  counterexample at (k=" << d.k << ", j=" << d.j << "): " << d.note
                      << '\n';
    }
    return check.ok ? 0 : kExitNotThreshold;
}

// One table row per (payoff, variant) cell: asymptotic ACV/AMP next to the
// finite-n argmax at the requested n.
struct TableRow {
    asym::AsymptoticCell cell;
    std::vector<double> acv_emp;
    double amp_emp = 0.0;
};

std::vector<TableRow> build_table(int n, bool full_scan) {
    std::vector<TableRow> rows;
    for (const auto& cell : asym::asymptotic_table()) {
        TableRow row{cell, {}, 0.0};
        ProblemSpec spec{cell.variant, {cell.payoff, 0.0, 1.0}, n};
        const ArgmaxResult best = optimize(spec, full_scan);
        row.acv_emp.push_back(static_cast<double>(best.best_strategy.r) / n);
        if (best.best_strategy.kind == StrategyKind::TwoThreshold)
            row.acv_emp.push_back(static_cast<double>(best.best_strategy.s) / n);
        row.amp_emp = best.best_value.value;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string acv_str(const std::vector<double>& acv) {
    std::string out = fmt6(acv[0]);
    for (size_t i = 1; i < acv.size(); ++i) out += ", " + fmt6(acv[i]);
    return out;
}

const char* payoff_label(PayoffKind kind) {
    switch (kind) {
    case PayoffKind::Binary: return "p_B";
    case PayoffKind::Cost: return "p_C";
    case PayoffKind::Perquisite: return "p_P";
    default: return "?";
    }
}

int cmd_table(int n, bool full_scan, const std::string& format) {
    const auto rows = build_table(n, full_scan);
    if (format == "json") {
        json out{{"schema", "v1"}, {"command", "table"}, {"n", n}};
        json jrows = json::array();
        for (const auto& row : rows)
            jrows.push_back({{"payoff", to_string(row.cell.payoff)},
                             {"variant", to_string(row.cell.variant)},
                             {"acv", row.cell.acv},
                             {"amp", row.cell.amp},
                             {"acv_empirical", row.acv_emp},
                             {"amp_empirical", row.amp_emp},
                             {"n", n}});
        out["rows"] = jrows;
        std::cout << out.dump() << '\n';
    } else if (format == "csv") {
        std::cout << "payoff,variant,acv1,acv2,amp,emp_acv1,emp_acv2,emp_amp,n\n";
        for (const auto& row : rows) {
            std::cout << payoff_label(row.cell.payoff) << ',' << to_string(row.cell.variant) << ','
                      << fmt6(row.cell.acv[0]) << ','
                      << (row.cell.acv.size() > 1 ? fmt6(row.cell.acv[1]) : "") << ','
                      << fmt6(row.cell.amp) << ',' << fmt6(row.acv_emp[0]) << ','
                      << (row.acv_emp.size() > 1 ? fmt6(row.acv_emp[1]) : "") << ','
                      << fmt6(row.amp_emp) << ',' << n << '\n';
        }
    } else {
        // Payoff-by-variant grid, asymptotic values with
        // the empirical argmax at the given n in parentheses.
        std::cout << "ACV = asymptotic optimal cutoff value, AMP = asymptotic maximum expected "
                     "payoff; empirical values at n="
                  << n << " in parentheses.\n\n";
        std::cout << "| Payoff | Classic ACV | Classic AMP | Best-or-Worst ACV | Best-or-Worst "
                     "AMP | Postdoc ACV | Postdoc AMP |\n";
        std::cout << "|---|---|---|---|---|---|---|\n";
        for (PayoffKind payoff :
             {PayoffKind::Binary, PayoffKind::Cost, PayoffKind::Perquisite}) {
            std::cout << "| " << payoff_label(payoff) << " |";
            for (Variant variant :
                 {Variant::Classic, Variant::BestOrWorst, Variant::Postdoc}) {
                for (const auto& row : rows) {
                    if (row.cell.payoff != payoff || row.cell.variant != variant) continue;
                    std::cout << ' ' << acv_str(row.cell.acv) << " (" << acv_str(row.acv_emp)
                              << ") | " << fmt6(row.cell.amp) << " (" << fmt6(row.amp_emp)
                              << ") |";
                }
            }
            std::cout << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal stopping for the secretary problem and its Best-or-Worst and Postdoc "
                 "variants: exact finite-n values, optimal cutoffs, asymptotic constants, "
                 "Monte Carlo estimates and a dynamic-programming oracle."};
    app.require_subcommand(1);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "expected payoff of a cutoff strategy");
    SpecFlags ev_spec;
    ev_spec.attach(ev);
    int ev_r = 0;
    std::optional<int> ev_s;
    std::string ev_format = "json";
    ev->add_option("--r", ev_r, "cutoff threshold")->required();
    ev->add_option("--s", ev_s, "second threshold (unbalanced, postdoc cost)");
    ev->add_option("--format", ev_format,
                   "json | csv | md (csv columns: variant,payoff,n,r,s,value,exact,method)")
        ->default_str("json");

    // optimize
    auto* op = app.add_subcommand("optimize", "exhaustive argmax over cutoff strategies");
    SpecFlags op_spec;
    op_spec.attach(op);
    bool op_full = false;
    std::string op_format = "json";
    op->add_flag("--full-scan", op_full, "force the full O(n^2) two-threshold grid");
    op->add_option("--format", op_format,
                   "json | csv | md (csv columns: variant,payoff,n,r,s,value,exact,method)")
        ->default_str("json");

    // simulate
    auto* si = app.add_subcommand("simulate", "Monte Carlo estimate with confidence interval");
    SpecFlags si_spec;
    si_spec.attach(si);
    int si_r = 0;
    std::optional<int> si_s;
    std::uint64_t si_samples = 100000;
    std::uint64_t si_seed = 12345;
    int si_workers = 1;
    si->add_option("--r", si_r, "cutoff threshold")->required();
    si->add_option("--s", si_s, "second threshold (unbalanced, postdoc cost)");
    si->add_option("--samples", si_samples, "number of sampled arrival orders");
    si->add_option("--seed", si_seed, "RNG seed (reports are reproducible)");
    si->add_option("--workers", si_workers, "worker threads (STOPRULE_THREADS caps this)");

    // oracle
    auto* orc = app.add_subcommand(
        "oracle", "backward-induction optimum and threshold-structure check");
    SpecFlags orc_spec;
    orc_spec.attach(orc);
    std::string orc_export;
    std::string orc_format = "text";
    orc->add_option("--export-policy", orc_export,
                    "write the decision table as CSV (columns: k,j,decision,value)");
    orc->add_option("--format", orc_format, "text | json")->default_str("text");

    // table
    auto* tb = app.add_subcommand("table", "asymptotic vs finite-n comparison grid");
    int tb_n = 10000;
    bool tb_full = false;
    std::string tb_format = "md";
    tb->add_option("--n", tb_n, "candidate count for the empirical columns");
    tb->add_flag("--full-scan", tb_full, "force the full two-threshold grid");
    tb->add_option("--format", tb_format,
                   "md | csv | json (csv columns: payoff,variant,acv1,acv2,amp,"
                   "emp_acv1,emp_acv2,emp_amp,n)")
        ->default_str("md");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (ev->parsed()) return cmd_evaluate(ev_spec, ev_r, ev_s, ev_format);
        if (op->parsed()) return cmd_optimize(op_spec, op_full, op_format);
        if (si->parsed()) return cmd_simulate(si_spec, si_r, si_s, si_samples, si_seed, si_workers);
        if (orc->parsed()) return cmd_oracle(orc_spec, orc_export, orc_format);
        if (tb->parsed()) return cmd_table(tb_n, tb_full, tb_format);
    } catch (const StopruleError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
