#ifndef IFDIV_SIMULATOR_HPP
#define IFDIV_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "ifdiv/belief_policy.hpp"
#include "ifdiv/mdp_model.hpp"
#include "ifdiv/rng.hpp"

namespace ifdiv {

/// True environment. The channels here may differ from the agent's model.
struct EnvConfig {
    GEParams params1;
    GEParams params2;
    int max_misses = 4;
    CostModel costs;
    /// Safety cap for environments that never absorb; an episode that hits it
    /// is reported as truncated.
    std::int64_t step_limit = std::numeric_limits<std::int64_t>::max();
};

struct EpisodeResult {
    std::uint64_t seed = 0;
    /// number of slots (transmission attempts) until n reached N
    std::int64_t lifetime = 0;
    double total_reward = 0.0;
    /// n_counts[k]: slots whose outcome left the counter at k, k = 0..N;
    /// n_counts[N] == 1 for every completed episode.
    std::vector<std::int64_t> n_counts;
    std::array<std::int64_t, 2> on_counts{};
    bool truncated = false;
};

/// Per-episode seed: splitmix64 finalizer applied to
/// base_seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t index);

/// One episode to absorption. Random-number layout (Xoshiro256 seeded with
/// `seed`): two draws for the initial states (interface 1, then 2, each Good
/// iff draw < pi_G), then exactly two draws per slot in interface order,
/// independent of the actions taken.
EpisodeResult run_episode(const EnvConfig &env, Agent &agent, std::uint64_t seed);

struct BatchSummary {
    long episodes = 0;
    double mean_lifetime = 0.0;
    double se_lifetime = 0.0;
    double mean_reward = 0.0;
    double se_reward = 0.0;
    /// pooled slots per counter value 0..N-1, normalised to sum to one
    std::vector<double> occupancy;
    /// pooled fraction of slots each interface transmitted
    std::array<double, 2> utilization{};
    long truncated = 0;
};

/// Order-insensitive aggregation; SE = sample standard deviation / sqrt(count),
/// zero for a single episode.
BatchSummary summarize(const std::vector<EpisodeResult> &results, int max_misses);

struct BatchOptions {
    long episodes = 1;
    std::uint64_t base_seed = 1;
    /// 0 = hardware concurrency
    unsigned threads = 0;
};

/// Runs `episodes` episodes with seeds episode_seed(base_seed, i); results are
/// independent of thread count and scheduling.
std::vector<EpisodeResult> run_episodes(const EnvConfig &env, const Agent &prototype, const BatchOptions &opts);

BatchSummary run_batch(const EnvConfig &env, const Agent &prototype, const BatchOptions &opts);

struct PairedSummary {
    BatchSummary first;
    BatchSummary second;
    /// per-episode (first - second) differences
    double mean_reward_delta = 0.0;
    double se_reward_delta = 0.0;
    double mean_lifetime_delta = 0.0;
    double se_lifetime_delta = 0.0;
    /// mean_reward_delta / first.mean_reward
    double relative_reward_delta = 0.0;
    std::vector<double> reward_deltas;
    std::vector<double> lifetime_deltas;
};

/// Common random numbers: both agents replay the same per-episode seed, hence
/// the same channel trajectories.
PairedSummary run_paired(const EnvConfig &env, const Agent &first, const Agent &second,
                         const BatchOptions &opts);

} // namespace ifdiv

#endif
