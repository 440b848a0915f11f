#include "ifdiv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ifdiv/errors.hpp"

namespace ifdiv {

std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t state = base_seed + index * 0x9E3779B97F4A7C15ULL;
    return splitmix64(state);
}

namespace {

// draw < p  <=>  (x >> 11) < ceil(p * 2^53) for x the raw 64-bit output, so
// the per-slot comparison can stay in integers without changing any outcome.
std::uint64_t draw_threshold(double prob) {
    return static_cast<std::uint64_t>(std::ceil(prob * 0x1.0p53));
}

struct ChannelSampler {
    std::uint64_t leave_good;
    std::uint64_t leave_bad;

    explicit ChannelSampler(const GEParams &params)
        : leave_good(draw_threshold(params.p)), leave_bad(draw_threshold(params.r)) {}

    ChannelState operator()(ChannelState current, std::uint64_t raw) const {
        const std::uint64_t k = raw >> 11;
        if (current == ChannelState::Good)
            return k < leave_good ? ChannelState::Bad : ChannelState::Good;
        return k < leave_bad ? ChannelState::Good : ChannelState::Bad;
    }
};

} // namespace

EpisodeResult run_episode(const EnvConfig &env, Agent &agent, std::uint64_t seed) {
    if (env.max_misses < 1)
        throw ValidationError("survival threshold N must be at least 1");
    const SteadyState pi1 = steady_state(env.params1);
    const SteadyState pi2 = steady_state(env.params2);
    const InterfaceCosts costs = interface_costs(env.costs);
    const int max_misses = env.max_misses;
    std::array<double, kNumActions> cost_of{};
    for (int a = 0; a < kNumActions; ++a)
        cost_of[static_cast<std::size_t>(a)] = action_cost(costs, kActions[static_cast<std::size_t>(a)]);
    const ChannelSampler channel1(env.params1);
    const ChannelSampler channel2(env.params2);

    Xoshiro256 rng(seed);
    EpisodeResult res;
    res.seed = seed;
    res.n_counts.assign(static_cast<std::size_t>(max_misses + 1), 0);

    ChannelState s1 = uniform01(rng) < pi1.good ? ChannelState::Good : ChannelState::Bad;
    ChannelState s2 = uniform01(rng) < pi2.good ? ChannelState::Good : ChannelState::Bad;
    int n = (s1 == ChannelState::Bad && s2 == ChannelState::Bad) ? 1 : 0;

    agent.reset();
    const bool unmasked = agent.needs_full_observation();
    Observation obs{s1, s2, n};
    std::int64_t on1 = 0;
    std::int64_t on2 = 0;
    double total = 0.0;
    std::int64_t slots = 0;
    while (n < max_misses) {
        if (slots >= env.step_limit) {
            res.truncated = true;
            break;
        }
        const Action a = agent.decide(obs);
        s1 = channel1(s1, rng());
        s2 = channel2(s2, rng());
        const bool delivered = transmission_outcome(s1, s2, a) == Outcome::Success;
        n = delivered ? 0 : n + 1;
        const int ai = a.a1 ? (a.a2 ? 2 : 1) : 0;
        total += (delivered ? env.costs.success_reward : env.costs.miss_reward) - cost_of[static_cast<std::size_t>(ai)];
        ++slots;
        ++res.n_counts[static_cast<std::size_t>(n)];
        on1 += a.a1;
        on2 += a.a2;
        obs.n = n;
        if (unmasked) {
            obs.o1 = s1;
            obs.o2 = s2;
        } else {
            obs.o1 = a.a1 ? std::optional<ChannelState>(s1) : std::nullopt;
            obs.o2 = a.a2 ? std::optional<ChannelState>(s2) : std::nullopt;
        }
    }
    if (slots == 0 && n >= max_misses)
        res.n_counts[static_cast<std::size_t>(n)] = 1; // N = 1 and the initial probe already failed
    res.lifetime = slots;
    res.total_reward = total;
    res.on_counts = {on1, on2};
    return res;
}

namespace {

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double> &xs) {
    Moments m;
    if (xs.empty())
        return m;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs)
            ss += (x - m.mean) * (x - m.mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        m.se = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return m;
}

} // namespace

BatchSummary summarize(const std::vector<EpisodeResult> &results, int max_misses) {
    BatchSummary out;
    out.episodes = static_cast<long>(results.size());
    std::vector<double> lifetimes;
    std::vector<double> rewards;
    lifetimes.reserve(results.size());
    rewards.reserve(results.size());
    std::vector<double> pooled(static_cast<std::size_t>(max_misses), 0.0);
    double slots = 0.0;
    std::array<double, 2> on{};
    for (const EpisodeResult &r : results) {
        lifetimes.push_back(static_cast<double>(r.lifetime));
        rewards.push_back(r.total_reward);
        for (int k = 0; k < max_misses; ++k)
            pooled[static_cast<std::size_t>(k)] += static_cast<double>(r.n_counts[static_cast<std::size_t>(k)]);
        slots += static_cast<double>(r.lifetime);
        on[0] += static_cast<double>(r.on_counts[0]);
        on[1] += static_cast<double>(r.on_counts[1]);
        out.truncated += r.truncated ? 1 : 0;
    }
    const Moments lm = moments(lifetimes);
    const Moments rm = moments(rewards);
    out.mean_lifetime = lm.mean;
    out.se_lifetime = lm.se;
    out.mean_reward = rm.mean;
    out.se_reward = rm.se;
    double pooled_total = 0.0;
    for (double x : pooled)
        pooled_total += x;
    if (pooled_total > 0.0)
        for (double &x : pooled)
            x /= pooled_total;
    out.occupancy = std::move(pooled);
    if (slots > 0.0)
        out.utilization = {on[0] / slots, on[1] / slots};
    return out;
}

std::vector<EpisodeResult> run_episodes(const EnvConfig &env, const Agent &prototype, const BatchOptions &opts) {
    if (opts.episodes < 1)
        throw ValidationError("a batch needs at least one episode");
    // validate up front so worker threads never throw on configuration
    steady_state(env.params1);
    steady_state(env.params2);
    interface_costs(env.costs);

    const auto count = static_cast<std::size_t>(opts.episodes);
    std::vector<EpisodeResult> results(count);
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    auto work = [&](unsigned worker) {
        std::unique_ptr<Agent> agent = prototype.clone();
        for (std::size_t i = worker; i < count; i += threads)
            results[i] = run_episode(env, *agent, episode_seed(opts.base_seed, i));
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
    }
    return results;
}

BatchSummary run_batch(const EnvConfig &env, const Agent &prototype, const BatchOptions &opts) {
    return summarize(run_episodes(env, prototype, opts), env.max_misses);
}

PairedSummary run_paired(const EnvConfig &env, const Agent &first, const Agent &second,
                         const BatchOptions &opts) {
    const std::vector<EpisodeResult> a = run_episodes(env, first, opts);
    const std::vector<EpisodeResult> b = run_episodes(env, second, opts);
    PairedSummary out;
    out.first = summarize(a, env.max_misses);
    out.second = summarize(b, env.max_misses);
    out.reward_deltas.reserve(a.size());
    out.lifetime_deltas.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.reward_deltas.push_back(a[i].total_reward - b[i].total_reward);
        out.lifetime_deltas.push_back(static_cast<double>(a[i].lifetime - b[i].lifetime));
    }
    const Moments rd = moments(out.reward_deltas);
    const Moments ld = moments(out.lifetime_deltas);
    out.mean_reward_delta = rd.mean;
    out.se_reward_delta = rd.se;
    out.mean_lifetime_delta = ld.mean;
    out.se_lifetime_delta = ld.se;
    out.relative_reward_delta = out.first.mean_reward != 0.0 ? rd.mean / out.first.mean_reward : 0.0;
    return out;
}

} // namespace ifdiv
