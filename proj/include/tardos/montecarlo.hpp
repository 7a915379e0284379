#pragma once
// Monte Carlo validation of the analytic quantities. All estimators run in
// fixed blocks of trials, each block on its own RNG substream derived from
// the master seed, with compensated within-block accumulation — results are
// reproducible bit for bit for a given (seed, trials) regardless of how the
// caller batches the work.

#include <cstdint>
#include <vector>

#include "tardos/attacks.hpp"
#include "tardos/model.hpp"
#include "tardos/rng.hpp"

namespace tardos {

inline constexpr long long mc_block_trials = 65536;
inline constexpr long long mc_min_tail_hits = 25;

struct McEstimate {
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
    long long n = 0;
};

// Conditional output rate per count: hat K_b = E[theta_alpha | sigma_alpha=b],
// pooled over symbols, using the exact theta per draw rather than a sampled
// pick (same mean, lower variance).
struct KbEstimateRow {
    long long n = 0;      // pooled (trial, symbol) observations with count b
    double mean = 0.0;
    double se = 0.0;
};

struct KbEstimate {
    std::vector<KbEstimateRow> rows; // indexed by b = 0..c
};

// Mean per-segment coalition score sum, Rao-Blackwellized over the output
// pick: E[ sum_alpha theta_alpha (sigma_alpha g1(p_alpha) +
//          (c-sigma_alpha) g0(p_alpha)) ].
McEstimate empirical_mu(const Strategy& s, const CodeParams& params, long long trials,
                        std::uint64_t seed);

KbEstimate empirical_kb(const Strategy& s, const CodeParams& params, long long trials,
                        std::uint64_t seed);

// Per-segment innocent score moments (mean should be 0, variance 1).
struct MomentEstimate {
    McEstimate mean;
    McEstimate var;
};
MomentEstimate empirical_innocent_moments(const Strategy& s, const CodeParams& params,
                                          long long trials, std::uint64_t seed);

// One simulated m-segment trial yields the innocent user's standardized score
// total / sqrt(m) and the coalition's total score.
struct ScoreSample {
    double innocent_std;
    double coalition_total;
};
std::vector<ScoreSample> simulate_scores(const Strategy& s, const CodeParams& params, int m,
                                         long long trials, std::uint64_t seed);

// Empirical tail P(innocent standardized score > z) for several thresholds in
// one pass. Refuses thresholds whose hit count is too small to support an
// estimate.
struct FpEstimate {
    double z = 0.0;
    long long hits = 0;
    long long trials = 0;
    double rate = 0.0;
    double se = 0.0;
};
std::vector<FpEstimate> empirical_fp(const Strategy& s, const CodeParams& params, int m,
                                     const std::vector<double>& zs, long long trials,
                                     std::uint64_t seed);

} // namespace tardos
