#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>

namespace helix {

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Problem Hamiltonian diagonal in the computational basis. Qubit a is bit a
/// of the basis index (qubit 0 = least significant bit); bit value 0 is the
/// Z = +1 eigenstate.
template <typename Real>
struct BasicDiagonalHamiltonian {
    int n_qubits = 0;
    RealVector<Real> energies;

    [[nodiscard]] std::int64_t dim() const noexcept { return energies.size(); }
};

template <typename Real>
struct BasicStatevector {
    int n_qubits = 0;
    ComplexVector<Real> amplitudes;

    [[nodiscard]] std::int64_t dim() const noexcept { return amplitudes.size(); }
    [[nodiscard]] Real norm() const { return amplitudes.norm(); }
};

using DiagonalHamiltonian = BasicDiagonalHamiltonian<double>;
using Statevector = BasicStatevector<double>;

} // namespace helix
