#pragma once

#include "helix/decode.hpp"
#include "helix/feedback.hpp"
#include "helix/hamiltonian.hpp"
#include "helix/qubo.hpp"
#include "helix/reads.hpp"

#include <json.hpp>

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace helix {

inline constexpr const char* kToolVersion = "0.1.0";

/// Either a built-in fixture name or a file path.
struct InputSpec {
    std::string fixture;
    std::string path;
    ReadFormat format = ReadFormat::automatic;
    bool deduplicate = false;

    [[nodiscard]] std::string describe() const;
};

ReadSet load_input(const InputSpec& input);

/// Explicit penalty weights; unset ones fall back to PenaltyConfig::defaults_for.
struct PenaltyOverrides {
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> c;
    bool normalized = false;

    [[nodiscard]] PenaltyConfig resolve(const OverlapMatrix& overlaps) const;
};

/// Everything derived from one read set.
struct Problem {
    std::string label;
    ReadSet reads;
    OverlapMatrix overlaps;
    QuboInstance qubo;
    IsingHamiltonian ising;
    std::shared_ptr<const DiagonalHamiltonian> hp;
    GroundStateInfo ground;
};

Problem build_problem(const InputSpec& input, const PenaltyOverrides& penalties, int fixed_read);

/// The five labelled variants used for the convergence comparison, scaled
/// from the FALQON step `dt`.
std::vector<FeedbackConfig> comparison_preset(double dt, int layers);

/// Runs the command line; returns the process exit code (0 success,
/// 2 quality miss, 1 error).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

} // namespace helix
