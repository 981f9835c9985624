#include "helix/feedback.hpp"

#include "helix/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <thread>

namespace helix {
namespace {

std::vector<BasisOutcome> top_outcomes(const Statevector& state, const DiagonalHamiltonian& hp,
                                       const GroundStateInfo& ground, int m)
{
    // The heap top is the weakest of the kept entries; ties prefer the smaller index.
    using Entry = std::pair<double, std::int64_t>;
    auto better = [](const Entry& x, const Entry& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(better)> heap(better);
    const auto limit = static_cast<std::size_t>(std::max(m, 0));
    for (std::int64_t s = 0; s < state.dim() && limit > 0; ++s) {
        const Entry e{std::norm(state.amplitudes(s)), s};
        if (heap.size() < limit) {
            heap.push(e);
        } else if (better(e, heap.top())) {
            heap.pop();
            heap.push(e);
        }
    }
    std::vector<BasisOutcome> out;
    while (!heap.empty()) {
        const auto [p, s] = heap.top();
        heap.pop();
        out.push_back({static_cast<std::uint64_t>(s), p, hp.energies(s), ground.contains(static_cast<std::uint64_t>(s))});
    }
    std::sort(out.begin(), out.end(), [](const BasisOutcome& x, const BasisOutcome& y) {
        return x.probability != y.probability ? x.probability > y.probability : x.index < y.index;
    });
    return out;
}

void require_algorithm(const FeedbackConfig& cfg, Algorithm expected)
{
    if (cfg.algorithm != expected) {
        throw ConfigError("configuration '" + cfg.display_label() + "' is for " + to_string(cfg.algorithm)
                          + ", not " + to_string(expected));
    }
    cfg.validate();
}

// Shared layer loop. Layer k maps psi_{k-1} to psi_k with
//   exp(-i beta_k fdot dt H_d) exp(-i fdot dt H_p),
// where fdot = 1 except for the time-rescaled variant.
RunResult run_layers(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                     const LayerObserver& observer)
{
    const auto started = std::chrono::steady_clock::now();

    RunResult result;
    result.config = cfg;
    result.e0 = ground.e0;
    result.minimizer_count = ground.minimizers.size();

    Statevector state = plus_state<double>(hp.n_qubits, std::max(hp.n_qubits, max_qubits()));
    result.initial_energy = energy_expectation(state, hp);
    result.initial_success = success_probability(state, ground);

    const int layers = cfg.layer_budget();
    const bool rescaled = cfg.algorithm == Algorithm::tr_falqon;
    const bool rescale_is_identity = !rescaled || cfg.a == 1.0;
    double largest_first_order = 0.0;
    double feedback = 0.0; // i<[H_d, H_p]> on the state after the previous layer

    result.trace.reserve(static_cast<std::size_t>(layers));
    for (int k = 1; k <= layers; ++k) {
        TraceRecord rec;
        rec.layer = k;
        double fdot = 1.0;
        if (rescaled) {
            fdot = rescale_fdot((k - 1) * cfg.dt, cfg.a, cfg.t_f);
            if (!rescale_is_identity) {
                rec.fdot = fdot;
            }
        }

        double beta = 0.0;
        if (cfg.algorithm == Algorithm::so_falqon) {
            const CommutatorExpectations m = commutator_expectations(state, hp);
            rec.commutators = m;
            const double first = -m.a;
            largest_first_order = std::max(largest_first_order, std::abs(first));
            rec.beta1_candidate = first;
            if (std::abs(m.b) <= cfg.degenerate_b) {
                rec.degenerate_b = true;
                beta = first;
            } else {
                const double second = second_order_candidate(m, cfg.dt);
                rec.beta2_candidate = second;
                beta = std::abs(first) > std::abs(second) ? second : first;
            }
            const double clamp = cfg.beta_max.value_or(10.0 * largest_first_order);
            if ((cfg.beta_max || largest_first_order > 0.0) && std::abs(beta) > clamp) {
                beta = std::copysign(clamp, beta);
                rec.clamped = true;
            }
        } else {
            beta = k == 1 ? cfg.beta_initial : -feedback / fdot;
        }
        rec.beta = beta;

        const double duration = fdot * cfg.dt;
        apply_cost_phase(state, hp, duration);
        apply_driver_rotation(state, beta, duration);

        rec.energy = energy_expectation(state, hp);
        rec.success_prob = success_probability(state, ground);
        if (cfg.algorithm != Algorithm::so_falqon && k < layers) {
            feedback = commutator_first_order(state, hp);
        }
        result.trace.push_back(rec);
        if (observer && !observer(result.trace.back(), state)) {
            break;
        }
    }

    result.top_states = top_outcomes(state, hp, ground, cfg.top_states);
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace

std::string to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::falqon:
        return "falqon";
    case Algorithm::tr_falqon:
        return "tr-falqon";
    case Algorithm::so_falqon:
        return "so-falqon";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "falqon") {
        return Algorithm::falqon;
    }
    if (name == "tr-falqon" || name == "tr_falqon" || name == "tr") {
        return Algorithm::tr_falqon;
    }
    if (name == "so-falqon" || name == "so_falqon" || name == "so") {
        return Algorithm::so_falqon;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected falqon, tr-falqon or so-falqon)");
}

void FeedbackConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError(display_label() + ": dt must be positive");
    }
    if (max_layers < 1) {
        throw ConfigError(display_label() + ": max_layers must be at least 1");
    }
    if (algorithm == Algorithm::tr_falqon) {
        if (!(a >= 1.0)) {
            throw ConfigError(display_label() + ": temporal contraction a must be >= 1");
        }
        if (!(t_f > 0.0)) {
            throw ConfigError(display_label() + ": final time t_f must be positive");
        }
    }
    if (beta_max && !(*beta_max > 0.0)) {
        throw ConfigError(display_label() + ": beta_max must be positive");
    }
    if (degenerate_b < 0.0) {
        throw ConfigError(display_label() + ": degenerate_b must be non-negative");
    }
}

int FeedbackConfig::layer_budget() const
{
    if (algorithm != Algorithm::tr_falqon) {
        return max_layers;
    }
    // Contracted horizon tau_f = t_f / a walked in steps of dt; the small
    // relative slack stops t_f = a * L * dt from rounding up to L + 1.
    const double steps = (t_f / a) / dt;
    const double rounded = std::ceil(steps * (1.0 - 1e-12));
    return static_cast<int>(std::clamp(rounded, 1.0, static_cast<double>(max_layers)));
}

std::string FeedbackConfig::display_label() const { return label.empty() ? to_string(algorithm) : label; }

double rescale_f(double tau, double a, double t_f)
{
    const double w = 2.0 * std::numbers::pi * a / t_f;
    return a * tau - (t_f / (2.0 * std::numbers::pi * a)) * (a - 1.0) * std::sin(w * tau);
}

double rescale_fdot(double tau, double a, double t_f)
{
    const double w = 2.0 * std::numbers::pi * a / t_f;
    return a - (a - 1.0) * std::cos(w * tau);
}

double predicted_energy_change(const CommutatorExpectations& m, double beta, double dt)
{
    return dt * beta * m.a + dt * dt * (beta * beta * m.b + beta * m.c);
}

double second_order_candidate(const CommutatorExpectations& m, double dt)
{
    return -2.0 * (m.a + dt * m.c) / (dt * std::abs(m.b));
}

RunResult run_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                     const LayerObserver& observer)
{
    require_algorithm(cfg, Algorithm::falqon);
    return run_layers(hp, ground, cfg, observer);
}

RunResult run_tr_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        const LayerObserver& observer)
{
    require_algorithm(cfg, Algorithm::tr_falqon);
    return run_layers(hp, ground, cfg, observer);
}

RunResult run_so_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        const LayerObserver& observer)
{
    require_algorithm(cfg, Algorithm::so_falqon);
    return run_layers(hp, ground, cfg, observer);
}

RunResult run_feedback(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                       const LayerObserver& observer)
{
    switch (cfg.algorithm) {
    case Algorithm::falqon:
        return run_falqon(hp, ground, cfg, observer);
    case Algorithm::tr_falqon:
        return run_tr_falqon(hp, ground, cfg, observer);
    case Algorithm::so_falqon:
        return run_so_falqon(hp, ground, cfg, observer);
    }
    throw ConfigError("unknown algorithm");
}

bool is_nonincreasing(const RunResult& run, double slack)
{
    double previous = run.initial_energy;
    for (const TraceRecord& rec : run.trace) {
        if (rec.energy > previous + slack) {
            return false;
        }
        previous = rec.energy;
    }
    return true;
}

CriticalDtScan scan_critical_dt(const DiagonalHamiltonian& hp, const GroundStateInfo& ground,
                                const FeedbackConfig& cfg, std::span<const double> grid, int refine_steps,
                                double slack)
{
    if (grid.empty()) {
        throw ConfigError("critical dt search needs a non-empty grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ConfigError("dt grid must be strictly ascending positive values");
        }
    }

    auto evaluate = [&](double dt, bool refined) {
        FeedbackConfig c = cfg;
        c.algorithm = Algorithm::falqon;
        c.dt = dt;
        DtVerdict v;
        v.dt = dt;
        v.refined = refined;
        double previous = energy_expectation(plus_state<double>(hp.n_qubits, std::max(hp.n_qubits, max_qubits())), hp);
        const RunResult run = run_falqon(hp, ground, c, [&](const TraceRecord& rec, const Statevector&) {
            if (rec.energy > previous + slack) {
                v.first_violation = rec.layer;
                return false;
            }
            previous = rec.energy;
            return true;
        });
        v.monotone = v.first_violation == 0;
        v.layers = run.layers();
        v.final_energy = run.final_energy();
        return v;
    };

    CriticalDtScan scan;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        scan.verdicts.push_back(evaluate(grid[i], false));
        if (scan.verdicts.back().monotone) {
            best = i;
        }
    }
    if (!best) {
        return scan;
    }
    double lo = grid[*best];
    if (*best + 1 < grid.size()) {
        double hi = grid[*best + 1];
        for (int step = 0; step < refine_steps; ++step) {
            const double mid = 0.5 * (lo + hi);
            scan.verdicts.push_back(evaluate(mid, true));
            (scan.verdicts.back().monotone ? lo : hi) = mid;
        }
    }
    scan.critical = lo;
    return scan;
}

double find_critical_dt(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        std::span<const double> grid, int refine_steps, double slack)
{
    const CriticalDtScan scan = scan_critical_dt(hp, ground, cfg, grid, refine_steps, slack);
    if (!scan.critical) {
        throw NotFoundError("no dt in the grid gives a nonincreasing energy trace");
    }
    return *scan.critical;
}

std::vector<SuiteOutcome> run_suite(const std::vector<SuiteInstance>& instances,
                                    const std::vector<FeedbackConfig>& configs, int jobs)
{
    std::vector<SuiteOutcome> outcomes(instances.size() * configs.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t c = 0; c < configs.size(); ++c) {
            auto& o = outcomes[i * configs.size() + c];
            o.instance = instances[i].label;
            o.config = configs[c].display_label();
        }
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < outcomes.size(); idx = next++) {
            const SuiteInstance& inst = instances[idx / configs.size()];
            const FeedbackConfig& cfg = configs[idx % configs.size()];
            try {
                if (!inst.hamiltonian) {
                    throw ConfigError("instance '" + inst.label + "' has no Hamiltonian");
                }
                outcomes[idx].result = run_feedback(*inst.hamiltonian, inst.ground, cfg);
            } catch (const std::exception& e) {
                outcomes[idx].error = e.what();
            }
        }
    };
    const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(outcomes.size(), 1)));
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    return outcomes;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trace_csv(const RunResult& run)
{
    std::string out = "layer,beta,energy,success_prob,beta1_candidate,beta2_candidate,fdot\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const TraceRecord& r : run.trace) {
        out += std::to_string(r.layer);
        out += ',' + format_double(r.beta);
        out += ',' + format_double(r.energy);
        out += ',' + format_double(r.success_prob);
        out += ',' + opt(r.beta1_candidate);
        out += ',' + opt(r.beta2_candidate);
        out += ',' + opt(r.fdot);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json config_json(const FeedbackConfig& cfg)
{
    nlohmann::ordered_json j;
    j["label"] = cfg.display_label();
    j["algorithm"] = to_string(cfg.algorithm);
    j["dt"] = cfg.dt;
    j["max_layers"] = cfg.max_layers;
    if (cfg.algorithm == Algorithm::tr_falqon) {
        j["a"] = cfg.a;
        j["t_f"] = cfg.t_f;
    }
    if (cfg.algorithm == Algorithm::so_falqon) {
        j["beta_max"] = cfg.beta_max ? nlohmann::ordered_json(*cfg.beta_max) : nlohmann::ordered_json(nullptr);
        j["degenerate_b"] = cfg.degenerate_b;
    }
    j["beta_initial"] = cfg.beta_initial;
    j["top_states"] = cfg.top_states;
    return j;
}

FeedbackConfig config_from_json(const nlohmann::ordered_json& j)
{
    FeedbackConfig cfg;
    try {
        cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        cfg.label = j.value("label", std::string());
        cfg.dt = j.at("dt").get<double>();
        cfg.max_layers = j.value("max_layers", cfg.max_layers);
        cfg.a = j.value("a", cfg.a);
        cfg.t_f = j.value("t_f", cfg.a * cfg.max_layers * cfg.dt);
        if (j.contains("beta_max") && !j["beta_max"].is_null()) {
            cfg.beta_max = j["beta_max"].get<double>();
        }
        cfg.degenerate_b = j.value("degenerate_b", cfg.degenerate_b);
        cfg.beta_initial = j.value("beta_initial", cfg.beta_initial);
        cfg.top_states = j.value("top_states", cfg.top_states);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad feedback configuration: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::ordered_json run_summary(const RunResult& run, bool include_timing)
{
    nlohmann::ordered_json j;
    j["config"] = config_json(run.config);
    j["e0"] = run.e0;
    j["minimizer_count"] = run.minimizer_count;
    j["initial_energy"] = run.initial_energy;
    j["final_energy"] = run.final_energy();
    j["final_success_prob"] = run.final_success();
    j["layers_executed"] = run.layers();
    auto top = nlohmann::ordered_json::array();
    for (const BasisOutcome& b : run.top_states) {
        top.push_back({{"index", b.index}, {"probability", b.probability}, {"energy", b.energy}, {"ground", b.ground}});
    }
    j["top_states"] = std::move(top);
    if (include_timing) {
        j["wall_time_s"] = run.wall_time_s;
    }
    return j;
}

} // namespace helix
