#include "stoprule/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>
#include <vector>

#include "json.hpp"

namespace stoprule::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64: one mixed output per counter increment.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += kGolden);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, bound) via the high 64 bits of a 128-bit product.
    std::uint32_t below(std::uint32_t bound) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }
};

// The cutoff rules over (interview k, relative rank j). Written here from
// the rule statements, independently of the oracle's enumeration path.
bool mc_rule_accepts(Variant variant, const Strategy& strat, int k, int j) {
    if (strat.kind == StrategyKind::OneThreshold) {
        if (k <= strat.r) return false;
        if (variant == Variant::Classic) return j == 1;
        if (variant == Variant::BestOrWorst) return j == 1 || j == k;
        return j == 2; // Postdoc
    }
    if (j == 1 && k > strat.r) return true;
    if (variant == Variant::BestOrWorst) return j == k && k > strat.s;
    return j == 2 && k > strat.s; // Postdoc cost
}

double payoff_on_accept(const ProblemSpec& spec, int k, int overall_rank) {
    const int n = spec.n;
    if (spec.payoff.kind == PayoffKind::Unbalanced) {
        if (overall_rank == 1) return spec.payoff.M;
        if (overall_rank == n) return spec.payoff.m;
        return 0.0;
    }
    bool hit = false;
    switch (spec.variant) {
    case Variant::Classic: hit = overall_rank == 1; break;
    case Variant::BestOrWorst: hit = overall_rank == 1 || overall_rank == n; break;
    case Variant::Postdoc: hit = overall_rank == 2; break;
    }
    if (!hit) return 0.0;
    switch (spec.payoff.kind) {
    case PayoffKind::Binary: return 1.0;
    case PayoffKind::Cost: return 1.0 - static_cast<double>(k) / n;
    case PayoffKind::Perquisite: return 1.0 + static_cast<double>(k) / n;
    default: return 0.0;
    }
}

int env_thread_cap() {
    if (const char* env = std::getenv("STOPRULE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return 0;
}

} // namespace

double run_strategy(std::span<const int> order, const ProblemSpec& spec, const Strategy& strat) {
    validate(spec, strat);
    const int n = spec.n;
    if (static_cast<int>(order.size()) != n)
        throw StopruleError(ErrorCode::InvalidParameters, "order length must equal n");
    const int skip = strat.kind == StrategyKind::OneThreshold
                         ? strat.r
                         : std::min(strat.r, strat.s); // no decision needed earlier
    for (int k = skip + 1; k <= n; ++k) {
        const int rank_k = order[static_cast<size_t>(k - 1)];
        int j = 1;
        for (int i = 0; i < k - 1; ++i)
            if (order[static_cast<size_t>(i)] < rank_k) ++j;
        if (mc_rule_accepts(spec.variant, strat, k, j))
            return payoff_on_accept(spec, k, rank_k);
    }
    return 0.0; // nobody accepted
}

SimReport estimate(const ProblemSpec& spec, const Strategy& strat, std::uint64_t samples,
                   std::uint64_t seed, int workers) {
    validate(spec, strat);
    if (samples < 1)
        throw StopruleError(ErrorCode::InvalidParameters, "samples must be >= 1");
    const int n = spec.n;

    if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const int cap = env_thread_cap(); cap > 0) workers = std::min(workers, cap);

    // Fixed 4096-sample blocks: per-block sums are independent of the worker
    // count, and the final reduction always runs in block order.
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t num_blocks = (samples + kBlock - 1) / kBlock;
    std::vector<double> block_sum(num_blocks, 0.0);
    std::vector<double> block_sumsq(num_blocks, 0.0);

    // Each sample owns a splitmix64 counter window of n+1 increments.
    const std::uint64_t stride = static_cast<std::uint64_t>(n) + 1;

    const auto run_block = [&](std::uint64_t b) {
        std::vector<int> order(static_cast<size_t>(n));
        double sum = 0.0, sumsq = 0.0;
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(samples, lo + kBlock);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            SplitMix64 rng{seed + idx * stride * kGolden};
            std::iota(order.begin(), order.end(), 1);
            for (int i = n - 1; i >= 1; --i)
                std::swap(order[static_cast<size_t>(i)],
                          order[rng.below(static_cast<std::uint32_t>(i + 1))]);
            const double payoff = run_strategy(order, spec, strat);
            sum += payoff;
            sumsq += payoff * payoff;
        }
        block_sum[b] = sum;
        block_sumsq[b] = sumsq;
    };

    if (workers == 1 || num_blocks == 1) {
        for (std::uint64_t b = 0; b < num_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        const int active = static_cast<int>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), num_blocks));
        pool.reserve(static_cast<size_t>(active));
        for (int w = 0; w < active; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t b = static_cast<std::uint64_t>(w); b < num_blocks;
                     b += static_cast<std::uint64_t>(active))
                    run_block(b);
            });
        for (auto& t : pool) t.join();
    }

    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        total += block_sum[b];
        total_sq += block_sumsq[b];
    }

    SimReport report;
    report.samples = samples;
    report.seed = seed;
    report.estimate = total / static_cast<double>(samples);
    if (samples >= 2) {
        const double variance =
            std::max(0.0, (total_sq - static_cast<double>(samples) * report.estimate *
                                          report.estimate) /
                              static_cast<double>(samples - 1));
        report.std_error = std::sqrt(variance / static_cast<double>(samples));
        report.std_error_defined = true;
    }
    report.ci95_low = report.estimate - 1.96 * report.std_error;
    report.ci95_high = report.estimate + 1.96 * report.std_error;
    return report;
}

std::string to_json_string(const SimReport& report, int indent) {
    nlohmann::json j{{"estimate", report.estimate},
                     {"samples", report.samples},
                     {"std_error", report.std_error},
                     {"std_error_defined", report.std_error_defined},
                     {"ci95_low", report.ci95_low},
                     {"ci95_high", report.ci95_high},
                     {"seed", report.seed},
                     {"generator", report.generator}};
    return j.dump(indent);
}

} // namespace stoprule::mc
