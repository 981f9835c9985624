#pragma once

#include "helix/hamiltonian.hpp"
#include "helix/statevector.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace helix {

enum class Algorithm { falqon, tr_falqon, so_falqon };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct FeedbackConfig {
    std::string label;
    Algorithm algorithm = Algorithm::falqon;
    double dt = 0.01;
    int max_layers = 300;
    /// Temporal contraction (time-rescaled variant only).
    double a = 1.0;
    /// Physical final time of the rescaled schedule (time-rescaled variant only).
    double t_f = 0.0;
    /// Clamp on |beta| for the second-order variant. When unset the clamp is
    /// 10x the largest first-order candidate seen so far in the run.
    std::optional<double> beta_max;
    double beta_initial = 0.0;
    /// |B| at or below this falls back to the first-order candidate.
    double degenerate_b = 1e-12;
    int top_states = 8;

    void validate() const;
    /// Layers the run will execute: max_layers, capped for the time-rescaled
    /// variant by ceil((t_f / a) / dt).
    [[nodiscard]] int layer_budget() const;
    [[nodiscard]] std::string display_label() const;
};

struct TraceRecord {
    int layer = 0;
    double beta = 0.0;
    double energy = 0.0;
    double success_prob = 0.0;
    std::optional<double> beta1_candidate;
    std::optional<double> beta2_candidate;
    std::optional<double> fdot;
    /// Second-order variant: expectations measured on the state entering the layer.
    std::optional<CommutatorExpectations> commutators;
    bool degenerate_b = false;
    bool clamped = false;
};

struct BasisOutcome {
    std::uint64_t index = 0;
    double probability = 0.0;
    double energy = 0.0;
    bool ground = false;
};

struct RunResult {
    FeedbackConfig config;
    std::vector<TraceRecord> trace;
    double initial_energy = 0.0;
    double initial_success = 0.0;
    double e0 = 0.0;
    std::size_t minimizer_count = 0;
    /// Most probable basis states of the final state, descending.
    std::vector<BasisOutcome> top_states;
    double wall_time_s = 0.0;

    [[nodiscard]] double final_energy() const { return trace.empty() ? initial_energy : trace.back().energy; }
    [[nodiscard]] double final_success() const { return trace.empty() ? initial_success : trace.back().success_prob; }
    [[nodiscard]] int layers() const { return static_cast<int>(trace.size()); }
};

/// Called after each layer; return false to stop the run early.
using LayerObserver = std::function<bool(const TraceRecord&, const Statevector&)>;

/// f(tau) = a tau - (t_f / (2 pi a)) (a - 1) sin(2 pi a tau / t_f)
double rescale_f(double tau, double a, double t_f);
/// f'(tau) = a - (a - 1) cos(2 pi a tau / t_f)
double rescale_fdot(double tau, double a, double t_f);

/// Second-order expansion of the one-layer energy change for the layer
/// exp(-i beta dt H_d) exp(-i dt H_p) around the measured state:
/// dt beta A + dt^2 (beta^2 B + beta C), with B carrying its factor 1/2.
double predicted_energy_change(const CommutatorExpectations& m, double beta, double dt);

/// Candidate -2 (A + dt C) / (dt |B|) of the second-order law.
double second_order_candidate(const CommutatorExpectations& m, double dt);

RunResult run_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                     const LayerObserver& observer = {});
RunResult run_tr_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        const LayerObserver& observer = {});
RunResult run_so_falqon(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        const LayerObserver& observer = {});
/// Dispatches on cfg.algorithm.
RunResult run_feedback(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                       const LayerObserver& observer = {});

struct DtVerdict {
    double dt = 0.0;
    bool monotone = false;
    /// First layer whose energy rose by more than the slack; 0 when monotone.
    int first_violation = 0;
    int layers = 0;
    double final_energy = 0.0;
    bool refined = false;
};

struct CriticalDtScan {
    std::vector<DtVerdict> verdicts;
    std::optional<double> critical;
};

/// Runs first-order FALQON (cfg.algorithm is ignored) for every grid value and
/// reports which ones give a nonincreasing energy trace. With refine_steps > 0
/// the interval between the selected value and the next grid value is bisected.
CriticalDtScan scan_critical_dt(const DiagonalHamiltonian& hp, const GroundStateInfo& ground,
                                const FeedbackConfig& cfg, std::span<const double> grid, int refine_steps = 0,
                                double slack = 1e-9);

/// Largest monotone grid value; throws NotFoundError when there is none.
double find_critical_dt(const DiagonalHamiltonian& hp, const GroundStateInfo& ground, const FeedbackConfig& cfg,
                        std::span<const double> grid, int refine_steps = 0, double slack = 1e-9);

bool is_nonincreasing(const RunResult& run, double slack = 1e-9);

struct SuiteInstance {
    std::string label;
    std::shared_ptr<const DiagonalHamiltonian> hamiltonian;
    GroundStateInfo ground;
};

struct SuiteOutcome {
    std::string instance;
    std::string config;
    std::optional<RunResult> result;
    std::string error;
};

/// Every (instance, config) pair; failures are recorded per pair. Results keep
/// instance-major order regardless of `jobs`.
std::vector<SuiteOutcome> run_suite(const std::vector<SuiteInstance>& instances,
                                    const std::vector<FeedbackConfig>& configs, int jobs = 1);

std::string trace_csv(const RunResult& run);
nlohmann::ordered_json config_json(const FeedbackConfig& cfg);
FeedbackConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json run_summary(const RunResult& run, bool include_timing = false);

/// "%.17g", the round-trip format used in every CSV.
std::string format_double(double v);

} // namespace helix
