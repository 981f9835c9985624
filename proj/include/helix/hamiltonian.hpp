#pragma once

#include "helix/qubo.hpp"
#include "helix/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace helix {

/// Largest register the simulator will allocate. 26 unless the
/// HELIX_MAX_QUBITS environment variable says otherwise.
int max_qubits();

/// Throws ResourceError when n exceeds `limit`, stating the memory required.
void check_qubit_budget(int n, int limit, const std::string& what);

DiagonalHamiltonian materialize(const IsingHamiltonian& h, int limit = max_qubits());

struct GroundStateInfo {
    double e0 = 0.0;
    std::vector<std::uint64_t> minimizers;
    double tolerance = 1e-9;

    [[nodiscard]] bool contains(std::uint64_t s) const;
};

/// Exhaustive scan: every index within `tolerance` of the minimum, ascending.
template <typename Real>
GroundStateInfo ground_state(const BasicDiagonalHamiltonian<Real>& hp, double tolerance = 1e-9)
{
    GroundStateInfo info;
    info.tolerance = tolerance;
    info.e0 = static_cast<double>(hp.energies.minCoeff());
    for (std::int64_t s = 0; s < hp.dim(); ++s) {
        if (static_cast<double>(hp.energies(s)) <= info.e0 + tolerance) {
            info.minimizers.push_back(static_cast<std::uint64_t>(s));
        }
    }
    return info;
}

/// out[s] = sum_k psi[s ^ (1 << k)], the transverse-field driver sum_k X_k.
template <typename Real>
BasicStatevector<Real> apply_driver(const BasicStatevector<Real>& state)
{
    BasicStatevector<Real> out{state.n_qubits, ComplexVector<Real>::Zero(state.dim())};
    for (int k = 0; k < state.n_qubits; ++k) {
        const std::int64_t bit = std::int64_t{1} << k;
        for (std::int64_t s = 0; s < state.dim(); ++s) {
            out.amplitudes(s) += state.amplitudes(s ^ bit);
        }
    }
    return out;
}

// Little-endian cache format: 8-byte magic, uint64 qubit count, then 2^n doubles.
void save_energies(const DiagonalHamiltonian& hp, const std::filesystem::path& path);
DiagonalHamiltonian load_energies(const std::filesystem::path& path);

} // namespace helix
