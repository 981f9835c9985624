#pragma once

#include "helix/overlap.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace helix {

/// Weights of the position constraint (a), read-uniqueness constraint (b)
/// and overlap cost (c). Feasibility needs a, b > c * max|w|.
struct PenaltyConfig {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;

    /// a = b = 2 * c * max|w| + 1.
    static PenaltyConfig defaults_for(const OverlapMatrix& overlaps, double c = 1.0);
    /// Same rule with c = 1 / max|w|, so overlap weights lie in [-1, 0].
    static PenaltyConfig normalized_for(const OverlapMatrix& overlaps);

    void validate(const OverlapMatrix& overlaps) const;
};

using BinaryVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

/// One-hot "read i at position p" encoding with one read pinned to position 0.
///
/// Free reads are the reads other than `fixed_read`, in ascending order; slot r
/// of that list together with free position p (1..N-1) maps to variable
/// a = r * (N - 1) + (p - 1).
struct QuboInstance {
    int n_reads = 0;
    int fixed_read = 0;
    std::vector<int> free_reads;
    Eigen::MatrixXd q;
    double offset = 0.0;
    PenaltyConfig penalties;
    OverlapMatrix overlaps;

    [[nodiscard]] int n_vars() const noexcept { return static_cast<int>(q.rows()); }
    [[nodiscard]] int positions() const noexcept { return n_reads - 1; }
    [[nodiscard]] int var_index(int slot, int position) const noexcept { return slot * (n_reads - 1) + (position - 1); }
    /// Slot of an original read index among the free reads, -1 for the fixed read.
    [[nodiscard]] int slot_of(int read) const;
};

QuboInstance build_qubo(const OverlapMatrix& overlaps, const PenaltyConfig& penalties, int fixed_read = 0);

/// x^T Q x + offset.
double objective(const QuboInstance& q, const BinaryVector& x);
/// Same, reading x from the bits of a basis-state index (bit a = variable a).
double objective(const QuboInstance& q, std::uint64_t bits);

/// One-hot assignment for an order that starts with the fixed read.
BinaryVector encode_order(const QuboInstance& q, const std::vector<int>& order);

/// Sum over a<b of J_ab Z_a Z_b + sum_a h_a Z_a + constant.
/// Only the strict upper triangle of `couplings` is used.
struct IsingHamiltonian {
    int n_qubits = 0;
    Eigen::MatrixXd couplings;
    Eigen::VectorXd fields;
    double constant = 0.0;
};

enum class IsingConvention {
    /// Energy-preserving substitution x = (1 - z) / 2.
    exact,
    /// The z-dependent part scaled by 4 and the constant dropped; same minimizers,
    /// different energies.
    scaled,
};

IsingHamiltonian qubo_to_ising(const QuboInstance& q, IsingConvention convention = IsingConvention::exact);

/// Energy of a spin assignment given as a basis index: bit a = 0 means z_a = +1.
double ising_energy(const IsingHamiltonian& h, std::uint64_t bits);

std::string ising_json(const IsingHamiltonian& h);
std::string qubo_json(const QuboInstance& q);
/// One term per line, e.g. "Z3 Z7  12.5"; the constant is written as "I".
std::string ising_pauli_text(const IsingHamiltonian& h);

} // namespace helix
