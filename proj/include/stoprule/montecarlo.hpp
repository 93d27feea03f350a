#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "stoprule/model.hpp"

namespace stoprule::mc {

// ============================================================================
// Monte Carlo estimation over uniformly random arrival orders. Sampling is
// counter-based: each sample index derives its own generator state from the
// seed, so reports are bit-identical for any worker count.
// ============================================================================

inline constexpr const char* kGeneratorId = "splitmix64-counter/fisher-yates";

struct SimReport {
    double estimate = 0.0;
    std::uint64_t samples = 0;
    double std_error = 0.0;
    bool std_error_defined = false; // false when samples < 2
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::uint64_t seed = 0;
    std::string generator = kGeneratorId;
};

// Executes the cutoff rule on one arrival order and returns the realized
// payoff. order[i] is the overall rank (1 = best) of the candidate seen at
// interview i+1. Only relative ranks revealed so far drive the decisions.
double run_strategy(std::span<const int> order, const ProblemSpec& spec, const Strategy& strat);

// Mean payoff over `samples` independent uniform permutations drawn from
// `seed`. Identical (seed, samples, spec, strat) give bit-identical reports
// for any `workers`. A STOPRULE_THREADS environment variable caps workers.
SimReport estimate(const ProblemSpec& spec, const Strategy& strat, std::uint64_t samples,
                   std::uint64_t seed, int workers = 1);

std::string to_json_string(const SimReport& report, int indent = -1);

} // namespace stoprule::mc
