#include "app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "experiment_config.hpp"
#include "ifdiv/analytic.hpp"
#include "ifdiv/belief_policy.hpp"
#include "ifdiv/errors.hpp"
#include "ifdiv/metrics.hpp"
#include "ifdiv/rng.hpp"
#include "ifdiv/simulator.hpp"
#include "ifdiv/solver.hpp"
#include "ifdiv/trace_fit.hpp"
#include "repro.hpp"

namespace ifdiv::app {

using nlohmann::json;

double sig9(double x) {
    if (!std::isfinite(x) || x == 0.0)
        return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

namespace {

std::string fmt9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

json num(double x) {
    if (!std::isfinite(x))
        return nullptr;
    return sig9(x);
}

json num_array(const std::vector<double> &xs) {
    json out = json::array();
    for (double x : xs)
        out.push_back(num(x));
    return out;
}

// Options shared by every subcommand.
struct CommonFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> seed;
    std::optional<std::string> episodes;
    std::optional<std::string> eta;
    std::optional<std::string> k_max;
    std::optional<std::string> threads;
    std::optional<std::string> theta;
    std::string out;
};

void add_common(CLI::App &cmd, CommonFlags &f) {
    cmd.add_option("--config", f.config_path, "flat key = value configuration file");
    cmd.add_option("--set", f.overrides, "override one configuration key (key=value), repeatable");
    cmd.add_option("--seed", f.seed, "base seed (unsigned 64-bit)");
    cmd.add_option("--episodes", f.episodes, "Monte-Carlo episodes");
    cmd.add_option("--eta", f.eta, "cost scaling factor, or a comma-separated list");
    cmd.add_option("--k-max", f.k_max, "value-iteration cap");
    cmd.add_option("--threads", f.threads, "worker threads for simulation (0 = all cores)");
    cmd.add_option("--theta", f.theta, "latency deadline in ms");
    cmd.add_option("--out", f.out, "write the result here");
}

ExperimentConfig resolve_config(const CommonFlags &f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in)
            throw ValidationError("cannot open config file '" + f.config_path + "'");
        load_config(in, cfg);
    }
    for (const std::string &kv : f.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.seed)
        cfg.set("seed", *f.seed);
    if (f.episodes)
        cfg.set("episodes", *f.episodes);
    if (f.eta)
        cfg.set("eta", *f.eta);
    if (f.k_max)
        cfg.set("k_max", *f.k_max);
    if (f.threads)
        cfg.set("threads", *f.threads);
    if (f.theta)
        cfg.set("theta", *f.theta);
    cfg.validate();
    return cfg;
}

void write_json_file(const std::string &path, const json &doc) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

json config_json(const ExperimentConfig &cfg) {
    return {
        {"p1", num(cfg.lte.p)},
        {"r1", num(cfg.lte.r)},
        {"p2", num(cfg.wifi.p)},
        {"r2", num(cfg.wifi.r)},
        {"E1", num(cfg.power_lte_mw)},
        {"E2", num(cfg.power_wifi_mw)},
        {"eta", num_array(cfg.eta)},
        {"N", cfg.max_misses},
        {"gamma", num(cfg.gamma)},
        {"epsilon", num(cfg.epsilon)},
        {"k_max", cfg.k_max},
        {"episodes", cfg.episodes},
        {"seed", cfg.seed},
    };
}

json policy_json(const DecisionProcess &proc, const Policy &policy) {
    json out = json::object();
    for (int s = 0; s < proc.size(); ++s)
        if (!proc.absorbing(s))
            out[proc.label(s)] = to_string(policy[static_cast<std::size_t>(s)]);
    return out;
}

json uniform_action(const DecisionProcess &proc, const Policy &policy) {
    std::optional<Action> seen;
    for (int s = 0; s < proc.size(); ++s) {
        if (proc.absorbing(s))
            continue;
        const Action a = policy[static_cast<std::size_t>(s)];
        if (seen && !(*seen == a))
            return nullptr;
        seen = a;
    }
    return seen ? json(to_string(*seen)) : json(nullptr);
}

json solver_json(const SolveResult &r) {
    return {{"iterations", r.iterations}, {"converged", r.converged}, {"last_delta", num(r.last_delta)}};
}

void warn_unconverged(std::ostream &err, std::string_view what, double eta, const SolveResult &r) {
    if (!r.converged)
        err << "warning: value iteration for " << what << " at eta=" << fmt9(eta) << " stopped after "
            << r.iterations << " sweeps (last change " << fmt9(r.last_delta) << "); using the last iterate\n";
}

json summary_json(const BatchSummary &s) {
    return {
        {"episodes", s.episodes},
        {"mean_lifetime", num(s.mean_lifetime)},
        {"se_lifetime", num(s.se_lifetime)},
        {"mean_reward", num(s.mean_reward)},
        {"se_reward", num(s.se_reward)},
        {"occupancy", num_array(s.occupancy)},
        {"utilization", {{"lte", num(s.utilization[0])}, {"wifi", num(s.utilization[1])}}},
        {"truncated", s.truncated},
    };
}

json comparison_json(const BatchSummary &candidate, const BatchSummary &reference, double lte_cost) {
    const PolicyOutcome cand{candidate.mean_lifetime, candidate.mean_reward, candidate.utilization[0]};
    const PolicyOutcome ref{reference.mean_lifetime, reference.mean_reward, reference.utilization[0]};
    json out;
    out["delta_lifetime"] = num(lifetime_delta(cand.lifetime, ref.lifetime));
    out["policy_deviation"] =
        num(policy_deviation(cand.lifetime, ref.lifetime, cand.lte_utilization, ref.lte_utilization, lte_cost));
    out["utilization_gap"] = num(cand.lte_utilization - ref.lte_utilization);
    try {
        out["reward_loss"] = num(reward_loss(cand.total_reward, ref.total_reward));
    } catch (const ValidationError &) {
        out["reward_loss"] = nullptr; // reference reward not positive
    }
    return out;
}

struct BuiltAgent {
    std::unique_ptr<Agent> agent;
    std::optional<SolveResult> solution;
};

BuiltAgent build_agent(const AgentSpec &spec, const ModelInputs &model, const ValueIterationOptions &options,
                       std::ostream &err) {
    BuiltAgent out;
    if (spec.kind == AgentKind::Fixed) {
        out.agent = make_agent(spec, model, options);
        return out;
    }
    SolveResult solution;
    out.agent = make_agent(spec, model, options, &solution);
    warn_unconverged(err, to_string(spec), model.costs.eta, solution);
    out.solution = std::move(solution);
    return out;
}

// --- solve -------------------------------------------------------------------

struct SolveFlags {
    std::string model = "full";
    bool allow_unconverged = false;
};

CommandResult cmd_solve(const ExperimentConfig &cfg, const SolveFlags &flags, const std::string &out_path,
                        std::ostream &err) {
    const ModelKind kind = parse_model_kind(flags.model);
    json doc{{"command", "solve"}, {"model", to_string(kind)}, {"config", config_json(cfg)}};
    json results = json::array();
    bool all_converged = true;
    for (double eta : cfg.eta) {
        const SolvedModel m = solve_model(kind, cfg.model(eta), cfg.solver_options());
        warn_unconverged(err, to_string(kind), eta, m.solution);
        all_converged = all_converged && m.solution.converged;
        json states = json::array();
        for (int s = 0; s < m.process.size(); ++s) {
            if (m.process.absorbing(s))
                continue;
            json q = json::object();
            for (int a = 0; a < kNumActions; ++a)
                q[to_string(kActions[static_cast<std::size_t>(a)])] = num(m.solution.table.q(s, a));
            states.push_back({{"state", m.process.label(s)},
                              {"n", m.process.states[static_cast<std::size_t>(s)].n},
                              {"action", to_string(m.policy[static_cast<std::size_t>(s)])},
                              {"v", num(m.solution.table.v(s))},
                              {"q", q}});
        }
        json entry = solver_json(m.solution);
        entry["eta"] = num(eta);
        entry["uniform_action"] = uniform_action(m.process, m.policy);
        entry["policy"] = policy_json(m.process, m.policy);
        entry["states"] = std::move(states);
        results.push_back(std::move(entry));
    }
    doc["results"] = std::move(results);
    if (!out_path.empty())
        write_json_file(out_path, doc);
    int code = kExitOk;
    if (!all_converged && !flags.allow_unconverged) {
        err << "error: value iteration did not meet epsilon within k_max (pass --allow-unconverged to accept)\n";
        code = kExitNotConverged;
    }
    return {code, std::move(doc)};
}

// --- analytic ----------------------------------------------------------------

CommandResult cmd_analytic(const ExperimentConfig &cfg, const std::string &agent_text, const std::string &out_path,
                           std::ostream &err) {
    const AgentSpec spec = parse_agent_spec(agent_text);
    if (spec.kind != AgentKind::Fixed && spec.kind != AgentKind::FullMdp)
        throw ValidationError("analytic evaluation covers fixed and fullmdp policies; simulate the others");
    const double eta = cfg.single_eta();
    const ModelInputs in = cfg.model(eta);
    json doc{{"command", "analytic"}, {"agent", to_string(spec)}, {"eta", num(eta)}, {"config", config_json(cfg)}};

    DecisionProcess proc;
    Policy policy;
    if (spec.kind == AgentKind::Fixed) {
        proc = build_full_mdp(in);
        policy = constant_policy(proc, spec.fixed);
    } else {
        SolvedModel m = solve_model(ModelKind::Full, in, cfg.solver_options());
        warn_unconverged(err, "full", eta, m.solution);
        doc["solver"] = solver_json(m.solution);
        proc = std::move(m.process);
        policy = std::move(m.policy);
    }
    const auto res = analyze(proc, policy, embed_initial(proc, initial_distribution(in.params1, in.params2)));
    if (!res) {
        doc["infinite_lifetime"] = true;
        doc["lifetime"] = nullptr;
    } else {
        doc["infinite_lifetime"] = false;
        doc["lifetime"] = num(res->expected_lifetime);
        doc["expected_total_reward"] = num(res->expected_total_reward);
        doc["occupancy"] = num_array(res->occupancy);
        doc["utilization"] = {{"lte", num(res->utilization[0])}, {"wifi", num(res->utilization[1])}};
        doc["residual"] = num(res->residual);
    }
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

// --- simulate ----------------------------------------------------------------

void write_episode_csv(const std::string &path, const std::vector<EpisodeResult> &results, int max_misses) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write '" + path + "'");
    out << "episode,seed,lifetime,total_reward";
    for (int k = 0; k <= max_misses; ++k)
        out << ",n" << k;
    out << ",lte_on,wifi_on\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const EpisodeResult &r = results[i];
        out << i << ',' << r.seed << ',' << r.lifetime << ',' << fmt9(r.total_reward);
        for (std::int64_t c : r.n_counts)
            out << ',' << c;
        out << ',' << r.on_counts[0] << ',' << r.on_counts[1] << '\n';
    }
}

CommandResult cmd_simulate(const ExperimentConfig &cfg, const std::string &agent_text, const std::string &csv_path,
                           const std::string &out_path, std::ostream &err) {
    const AgentSpec spec = parse_agent_spec(agent_text);
    const double eta = cfg.single_eta();
    const BuiltAgent built = build_agent(spec, cfg.model(eta), cfg.solver_options(), err);
    const EnvConfig env = cfg.env(eta);
    const auto results = run_episodes(env, *built.agent, {cfg.episodes, cfg.seed, cfg.threads});
    json doc{{"command", "simulate"}, {"agent", to_string(spec)}, {"eta", num(eta)}, {"config", config_json(cfg)}};
    if (built.solution)
        doc["solver"] = solver_json(*built.solution);
    doc["summary"] = summary_json(summarize(results, env.max_misses));
    std::string csv = csv_path;
    if (csv.empty() && !out_path.empty())
        csv = std::filesystem::path(out_path).replace_extension(".csv").string();
    if (!csv.empty()) {
        write_episode_csv(csv, results, env.max_misses);
        doc["episodes_csv"] = csv;
    }
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

// --- paired ------------------------------------------------------------------

CommandResult cmd_paired(const ExperimentConfig &cfg, const std::string &agent_text, const std::string &baseline_text,
                         const std::string &out_path, std::ostream &err) {
    const AgentSpec cand_spec = parse_agent_spec(agent_text);
    const AgentSpec base_spec = parse_agent_spec(baseline_text);
    const double eta = cfg.single_eta();
    const ModelInputs in = cfg.model(eta);
    const BuiltAgent base = build_agent(base_spec, in, cfg.solver_options(), err);
    const BuiltAgent cand = build_agent(cand_spec, in, cfg.solver_options(), err);
    const PairedSummary ps = run_paired(cfg.env(eta), *base.agent, *cand.agent, {cfg.episodes, cfg.seed, cfg.threads});

    json doc{{"command", "paired"},
             {"baseline", to_string(base_spec)},
             {"agent", to_string(cand_spec)},
             {"eta", num(eta)},
             {"config", config_json(cfg)}};
    doc["baseline_summary"] = summary_json(ps.first);
    doc["agent_summary"] = summary_json(ps.second);
    // deltas are baseline minus agent, per episode on a shared channel stream
    doc["mean_reward_delta"] = num(ps.mean_reward_delta);
    doc["se_reward_delta"] = num(ps.se_reward_delta);
    doc["mean_lifetime_delta"] = num(ps.mean_lifetime_delta);
    doc["se_lifetime_delta"] = num(ps.se_lifetime_delta);
    doc["relative_reward_delta"] = num(ps.relative_reward_delta);
    doc["comparison"] = comparison_json(ps.second, ps.first, interface_costs(in.costs).c1);
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

// --- sweep-eta ---------------------------------------------------------------

const std::vector<std::string> kSweepAgents{"fullmdp", "qmdp", "fpomdp", "hmdp"};

CommandResult cmd_sweep(const ExperimentConfig &cfg, const std::string &out_path, std::ostream &err) {
    json doc{{"command", "sweep-eta"}, {"config", config_json(cfg)}};
    json rows = json::array();
    for (double eta : cfg.eta) {
        const ModelInputs in = cfg.model(eta);
        const double lte_cost = interface_costs(in.costs).c1;
        json row{{"eta", num(eta)}};

        json solvers = json::object();
        json policies = json::object();
        json uniform = json::object();
        for (ModelKind kind : {ModelKind::Full, ModelKind::FPomdp, ModelKind::Hmdp}) {
            const SolvedModel m = solve_model(kind, in, cfg.solver_options());
            warn_unconverged(err, to_string(kind), eta, m.solution);
            solvers[std::string(to_string(kind))] = solver_json(m.solution);
            policies[std::string(to_string(kind))] = policy_json(m.process, m.policy);
            uniform[std::string(to_string(kind))] = uniform_action(m.process, m.policy);
            if (kind == ModelKind::Full) {
                const auto exact =
                    analyze(m.process, m.policy, embed_initial(m.process, initial_distribution(in.params1, in.params2)));
                if (exact)
                    row["analytic_fullmdp"] = {
                        {"lifetime", num(exact->expected_lifetime)},
                        {"expected_total_reward", num(exact->expected_total_reward)},
                        {"occupancy", num_array(exact->occupancy)},
                        {"utilization", {{"lte", num(exact->utilization[0])}, {"wifi", num(exact->utilization[1])}}},
                    };
                else
                    row["analytic_fullmdp"] = {{"lifetime", nullptr}, {"infinite_lifetime", true}};
            }
        }
        row["solver"] = std::move(solvers);
        row["uniform_action"] = std::move(uniform);
        row["policies"] = std::move(policies);

        // every agent replays the same seeds, so the reference comparison is paired
        const EnvConfig env = cfg.env(eta);
        const BatchOptions opts{cfg.episodes, cfg.seed, cfg.threads};
        json agents = json::object();
        std::optional<BatchSummary> reference;
        for (const std::string &name : kSweepAgents) {
            const BuiltAgent built = build_agent(parse_agent_spec(name), in, cfg.solver_options(), err);
            const BatchSummary s = run_batch(env, *built.agent, opts);
            json entry = summary_json(s);
            if (!reference)
                reference = s;
            entry["comparison"] = comparison_json(s, *reference, lte_cost);
            agents[name] = std::move(entry);
        }
        row["agents"] = std::move(agents);
        rows.push_back(std::move(row));
    }
    doc["results"] = std::move(rows);
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

// --- sensitivity -------------------------------------------------------------

CommandResult cmd_sensitivity(const ExperimentConfig &cfg, const std::string &delta_text,
                              const std::vector<std::string> &agent_names, const std::string &which,
                              const std::string &out_path, std::ostream &err) {
    const std::vector<double> deltas = parse_real_list(delta_text);
    if (which != "both" && which != "lte" && which != "wifi")
        throw ValidationError("--interface must be lte, wifi or both");
    const double eta = cfg.single_eta();
    const ModelInputs truth = cfg.model(eta);
    std::vector<AgentSpec> specs;
    for (const std::string &name : agent_names)
        specs.push_back(parse_agent_spec(name));
    // all perturbed models up front, so bad input fails before any simulation
    std::vector<ModelInputs> models;
    for (double delta : deltas) {
        ModelInputs model = truth;
        if (which != "wifi")
            model.params1 = scale_rates(truth.params1, delta);
        if (which != "lte")
            model.params2 = scale_rates(truth.params2, delta);
        models.push_back(model);
    }
    const double lte_cost = interface_costs(truth.costs).c1;
    const EnvConfig env = cfg.env(eta);
    const BatchOptions opts{cfg.episodes, cfg.seed, cfg.threads};

    const BuiltAgent reference_agent = build_agent(parse_agent_spec("fullmdp"), truth, cfg.solver_options(), err);
    const BatchSummary reference = run_batch(env, *reference_agent.agent, opts);

    json doc{{"command", "sensitivity"}, {"eta", num(eta)}, {"interface", which}, {"config", config_json(cfg)}};
    doc["reference"] = summary_json(reference);
    json rows = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const ModelInputs &model = models[i];
        json row{{"delta", num(deltas[i])},
                 {"model_params",
                  {{"p1", num(model.params1.p)},
                   {"r1", num(model.params1.r)},
                   {"p2", num(model.params2.p)},
                   {"r2", num(model.params2.r)}}}};
        json agents = json::object();
        for (const AgentSpec &spec : specs) {
            const BuiltAgent built = build_agent(spec, model, cfg.solver_options(), err);
            const BatchSummary s = run_batch(env, *built.agent, opts);
            json entry = summary_json(s);
            entry["comparison"] = comparison_json(s, reference, lte_cost);
            agents[to_string(spec)] = std::move(entry);
        }
        row["agents"] = std::move(agents);
        rows.push_back(std::move(row));
    }
    doc["results"] = std::move(rows);
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

// --- fit / gen-trace -----------------------------------------------------------

CommandResult cmd_fit(const ExperimentConfig &cfg, const std::string &trace_path, const std::string &out_path) {
    std::ifstream in(trace_path);
    if (!in)
        throw ValidationError("cannot open trace file '" + trace_path + "'");
    const LatencyTrace trace = read_trace_csv(in);
    const auto states = binarize(trace, cfg.theta_ms);
    json doc{{"command", "fit"}, {"trace", trace_path}, {"theta_ms", num(cfg.theta_ms)}, {"samples", trace.size()}};
    if (states.size() >= 2) {
        const FitResult f = fit_ge(states);
        doc["p_hat"] = f.p_hat ? num(*f.p_hat) : json(nullptr);
        doc["r_hat"] = f.r_hat ? num(*f.r_hat) : json(nullptr);
        doc["transitions"] = {{"GG", f.good_to_good}, {"GB", f.good_to_bad}, {"BG", f.bad_to_good}, {"BB", f.bad_to_bad}};
        doc["dwell"] = {{"good", f.good_dwell}, {"bad", f.bad_dwell}};
        doc["diagnostics"] = f.diagnostics;
    } else {
        doc["p_hat"] = nullptr;
        doc["r_hat"] = nullptr;
        doc["diagnostics"] = {"a single sample has no transitions"};
    }
    const double f_theta = latency_reliability(trace, cfg.theta_ms);
    doc["reliability"] = num(f_theta);
    doc["error_probability"] = num(1.0 - f_theta);
    if (!out_path.empty())
        write_json_file(out_path, doc);
    return {kExitOk, std::move(doc)};
}

struct GenFlags {
    std::string interface = "lte";
    long samples = 100000;
};

// Good slots get a latency uniformly inside (0.2, 0.98) * theta; Bad slots are
// lost half of the time and otherwise late by up to one more theta.
CommandResult cmd_gen_trace(const ExperimentConfig &cfg, const GenFlags &flags, const std::string &out_path) {
    if (out_path.empty())
        throw ValidationError("gen-trace needs --out");
    if (flags.samples < 2)
        throw ValidationError("gen-trace needs at least two samples");
    if (flags.interface != "lte" && flags.interface != "wifi")
        throw ValidationError("--interface must be lte or wifi");
    const GEParams gp = flags.interface == "lte" ? cfg.lte : cfg.wifi;
    const SteadyState pi = steady_state(gp);
    Xoshiro256 rng(cfg.seed);
    ChannelState s = uniform01(rng) < pi.good ? ChannelState::Good : ChannelState::Bad;
    LatencyTrace trace;
    trace.reserve(static_cast<std::size_t>(flags.samples));
    const double theta = cfg.theta_ms;
    for (long i = 0; i < flags.samples; ++i) {
        const double u = uniform01(rng);
        const double v = uniform01(rng);
        if (s == ChannelState::Good)
            trace.emplace_back(std::round((0.2 + 0.78 * u) * theta * 1000.0) / 1000.0);
        else if (v < 0.5)
            trace.emplace_back(std::nullopt);
        else
            trace.emplace_back(std::round((1.01 + u) * theta * 1000.0) / 1000.0);
        s = step(gp, s, uniform01(rng));
    }
    std::ofstream out(out_path);
    if (!out)
        throw ValidationError("cannot write '" + out_path + "'");
    write_trace_csv(out, trace);
    json doc{{"command", "gen-trace"},
             {"out", out_path},
             {"interface", flags.interface},
             {"p", num(gp.p)},
             {"r", num(gp.r)},
             {"samples", flags.samples},
             {"seed", cfg.seed}};
    return {kExitOk, std::move(doc)};
}

// --- repro -------------------------------------------------------------------

CommandResult cmd_repro(const std::string &manifest_path, const std::string &profile_text, const std::string &work,
                        const std::string &out_path, std::ostream &err) {
    std::ifstream in(manifest_path);
    if (!in)
        throw ValidationError("cannot open manifest '" + manifest_path + "'");
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParseError(1, std::string("manifest is not valid JSON: ") + e.what());
    }
    check_manifest(manifest);
    const Profile profile = parse_profile(profile_text);
    const std::filesystem::path work_dir =
        work.empty() ? std::filesystem::temp_directory_path() / "ifdiv-repro" : std::filesystem::path(work);
    std::filesystem::create_directories(work_dir);
    const ReproReport report = run_repro(manifest, profile, work_dir, err);

    std::ostringstream csv;
    write_report_csv(csv, report);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out)
            throw ValidationError("cannot write '" + out_path + "'");
        out << csv.str();
    }
    err << csv.str();
    json doc{{"command", "repro"},
             {"profile", profile_text},
             {"passed", report.passed},
             {"failed", report.failed},
             {"skipped", report.skipped}};
    return {report.ok() ? kExitOk : kExitFailure, std::move(doc)};
}

} // namespace

CommandResult execute(const std::vector<std::string> &args, std::ostream &err) {
    CLI::App app{"Interface-diversity policy toolkit"};
    app.name("ifdiv");
    app.require_subcommand(1);

    CommonFlags common;
    std::string agent = "qmdp";
    std::string baseline = "fullmdp";
    std::string csv_path;
    std::string delta_text = "0";
    std::vector<std::string> sens_agents{"qmdp", "fpomdp", "hmdp"};
    std::string sens_interface = "both";
    std::string trace_path;
    std::string manifest_path = "repro/manifest.json";
    std::string profile = "desk";
    std::string work_dir;
    SolveFlags solve_flags;
    GenFlags gen_flags;

    auto *solve = app.add_subcommand("solve", "value iteration and greedy policy");
    solve->add_option("--model", solve_flags.model, "full, fpomdp or hmdp");
    solve->add_flag("--allow-unconverged", solve_flags.allow_unconverged, "exit 0 even when k_max was hit");

    auto *analytic = app.add_subcommand("analytic", "absorbing-chain lifetime of a frozen policy");
    analytic->add_option("--agent", agent, "fixed:(a1,a2) or fullmdp");

    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo episodes for one agent");
    simulate->add_option("--agent", agent, "fullmdp, qmdp, fpomdp, hmdp or fixed:(a1,a2)");
    simulate->add_option("--csv", csv_path, "per-episode CSV (default: --out with .csv)");

    auto *paired = app.add_subcommand("paired", "common-random-numbers comparison of two agents");
    paired->add_option("--agent", agent, "candidate agent");
    paired->add_option("--baseline", baseline, "reference agent");

    auto *sweep = app.add_subcommand("sweep-eta", "solve, analyse and simulate every agent per eta");

    auto *sens = app.add_subcommand("sensitivity", "agents planning on perturbed (p, r)");
    sens->add_option("--delta", delta_text, "relative errors, comma-separated");
    sens->add_option("--agents", sens_agents, "agents to evaluate")->delimiter(',');
    sens->add_option("--interface", sens_interface, "lte, wifi or both");

    auto *fit = app.add_subcommand("fit", "estimate (p, r) and F(theta) from a latency trace");
    fit->add_option("--trace", trace_path, "CSV with header seq,latency_ms")->required();

    auto *gen = app.add_subcommand("gen-trace", "synthetic latency trace from a GE channel");
    gen->add_option("--interface", gen_flags.interface, "lte or wifi parameters");
    gen->add_option("--samples", gen_flags.samples, "trace length");

    auto *repro = app.add_subcommand("repro", "run the reproduction manifest");
    repro->add_option("--manifest", manifest_path, "manifest JSON");
    repro->add_option("--profile", profile, "desk or full");
    repro->add_option("--work-dir", work_dir, "scratch directory for generated files");

    for (CLI::App *cmd : {solve, analytic, simulate, paired, sweep, sens, fit, gen, repro})
        add_common(*cmd, common);

    std::vector<const char *> argv{"ifdiv"};
    for (const std::string &a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        std::ostringstream out;
        const int code = app.exit(e, out, err);
        err << out.str();
        return {code == 0 ? kExitOk : kExitValidation, nullptr};
    }

    try {
        if (repro->parsed())
            return cmd_repro(manifest_path, profile, work_dir, common.out, err);
        const ExperimentConfig cfg = resolve_config(common);
        if (solve->parsed())
            return cmd_solve(cfg, solve_flags, common.out, err);
        if (analytic->parsed())
            return cmd_analytic(cfg, analytic->count("--agent") ? agent : "fixed:(1,1)", common.out, err);
        if (simulate->parsed())
            return cmd_simulate(cfg, agent, csv_path, common.out, err);
        if (paired->parsed())
            return cmd_paired(cfg, agent, baseline, common.out, err);
        if (sweep->parsed()) {
            ExperimentConfig swept = cfg;
            if (!common.eta && common.config_path.empty())
                swept.eta = {0.0, 0.03, 0.07, 0.2, 1.0};
            return cmd_sweep(swept, common.out, err);
        }
        if (sens->parsed())
            return cmd_sensitivity(cfg, delta_text, sens_agents, sens_interface, common.out, err);
        if (fit->parsed())
            return cmd_fit(cfg, trace_path, common.out);
        if (gen->parsed())
            return cmd_gen_trace(cfg, gen_flags, common.out);
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << '\n';
        return {kExitParse, nullptr};
    } catch (const ValidationError &e) {
        err << "invalid input: " << e.what() << '\n';
        return {kExitValidation, nullptr};
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return {kExitFailure, nullptr};
    }
    return {kExitValidation, nullptr};
}

int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    const CommandResult r = execute(args, err);
    if (!r.document.is_null())
        out << r.document.dump(2) << '\n';
    return r.exit_code;
}

} // namespace ifdiv::app
