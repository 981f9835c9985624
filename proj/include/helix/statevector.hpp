#pragma once

#include "helix/hamiltonian.hpp"
#include "helix/types.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <stdexcept>

namespace helix {

/// Expectations of the commutators that drive the feedback laws, with
/// H_d = sum_k X_k and H_p the diagonal problem Hamiltonian:
///   a = i <[H_d, H_p]>
///   b = 1/2 <[[H_d, H_p], H_d]>
///   c = <[[H_d, H_p], H_p]>
struct CommutatorExpectations {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// Imaginary part left over in a term that is real by Hermiticity.
    double imag_residue = 0.0;
};

namespace detail {

template <typename Real>
void require_same_register(const BasicStatevector<Real>& state, const BasicDiagonalHamiltonian<Real>& hp)
{
    if (state.dim() != hp.dim()) {
        throw std::invalid_argument("statevector and Hamiltonian dimensions differ");
    }
}

// Sequential sum in fixed-size blocks; the order is independent of how the
// caller got here, so results are reproducible run to run.
template <typename T>
class BlockSum {
public:
    void add(const T& v)
    {
        block_ += v;
        if (++count_ == kBlock) {
            total_ += block_;
            block_ = T{};
            count_ = 0;
        }
    }
    [[nodiscard]] T value() const { return total_ + block_; }

private:
    static constexpr int kBlock = 4096;
    T total_{};
    T block_{};
    int count_ = 0;
};

} // namespace detail

template <typename Real = double>
BasicStatevector<Real> plus_state(int n_qubits, int limit = max_qubits())
{
    check_qubit_budget(n_qubits, limit, "plus_state");
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    const Real amp = static_cast<Real>(1.0 / std::sqrt(static_cast<double>(dim)));
    return {n_qubits, ComplexVector<Real>::Constant(dim, std::complex<Real>(amp, 0))};
}

template <typename Real = double>
BasicStatevector<Real> basis_state(int n_qubits, std::uint64_t index)
{
    BasicStatevector<Real> out{n_qubits, ComplexVector<Real>::Zero(std::int64_t{1} << n_qubits)};
    out.amplitudes(static_cast<std::int64_t>(index)) = 1;
    return out;
}

/// psi_s <- exp(-i * duration * E_s) psi_s.
template <typename Real>
void apply_cost_phase(BasicStatevector<Real>& state, const BasicDiagonalHamiltonian<Real>& hp, Real duration)
{
    detail::require_same_register(state, hp);
    auto& amps = state.amplitudes;
    for (std::int64_t s = 0; s < state.dim(); ++s) {
        const Real angle = -duration * hp.energies(s);
        amps(s) *= std::complex<Real>(std::cos(angle), std::sin(angle));
    }
}

/// Applies exp(-i * beta * duration * X_k) to every qubit. The X_k commute, so
/// the product of single-qubit rotations is exact.
template <typename Real>
void apply_driver_rotation(BasicStatevector<Real>& state, Real beta, Real duration)
{
    const Real theta = beta * duration;
    if (theta == Real(0)) {
        return;
    }
    const Real c = std::cos(theta);
    const Real s = std::sin(theta);
    auto* amps = state.amplitudes.data();
    const std::int64_t dim = state.dim();
    for (int k = 0; k < state.n_qubits; ++k) {
        const std::int64_t bit = std::int64_t{1} << k;
        for (std::int64_t base = 0; base < dim; base += 2 * bit) {
            for (std::int64_t i = base; i < base + bit; ++i) {
                const std::complex<Real> lo = amps[i];
                const std::complex<Real> hi = amps[i + bit];
                // c * v - i * s * w
                amps[i] = std::complex<Real>(c * lo.real() + s * hi.imag(), c * lo.imag() - s * hi.real());
                amps[i + bit] = std::complex<Real>(c * hi.real() + s * lo.imag(), c * hi.imag() - s * lo.real());
            }
        }
    }
}

template <typename Real>
double energy_expectation(const BasicStatevector<Real>& state, const BasicDiagonalHamiltonian<Real>& hp)
{
    detail::require_same_register(state, hp);
    detail::BlockSum<double> sum;
    for (std::int64_t s = 0; s < state.dim(); ++s) {
        sum.add(static_cast<double>(std::norm(state.amplitudes(s))) * static_cast<double>(hp.energies(s)));
    }
    return sum.value();
}

template <typename Real>
double success_probability(const BasicStatevector<Real>& state, const GroundStateInfo& ground)
{
    double p = 0.0;
    for (const std::uint64_t s : ground.minimizers) {
        if (static_cast<std::int64_t>(s) >= state.dim()) {
            throw std::invalid_argument("ground-state index outside the register");
        }
        p += std::norm(state.amplitudes(static_cast<std::int64_t>(s)));
    }
    return p;
}

/// Only the first-order term i<[H_d, H_p]> = -2 Im <H_d psi | H_p psi>,
/// evaluated without allocating auxiliary states.
template <typename Real>
double commutator_first_order(const BasicStatevector<Real>& state, const BasicDiagonalHamiltonian<Real>& hp)
{
    detail::require_same_register(state, hp);
    const auto& psi = state.amplitudes;
    detail::BlockSum<double> acc;
    for (std::int64_t s = 0; s < state.dim(); ++s) {
        std::complex<double> chi = 0;
        for (int k = 0; k < state.n_qubits; ++k) {
            chi += std::complex<double>(psi(s ^ (std::int64_t{1} << k)));
        }
        const std::complex<double> phi = static_cast<double>(hp.energies(s)) * std::complex<double>(psi(s));
        acc.add((std::conj(chi) * phi).imag());
    }
    return -2.0 * acc.value();
}

/// All three commutator expectations in one sweep. With chi = H_d psi and
/// phi = H_p psi:
///   a = -2 Im <chi|phi>
///   b = <chi|H_p chi> - Re <chi|H_d phi>
///   c = 2 Re <chi|H_p phi> - 2 Re <phi|H_d phi>
/// chi_s and (H_d phi)_s are formed from the n neighbours of s on the fly.
template <typename Real>
CommutatorExpectations commutator_expectations(const BasicStatevector<Real>& state,
                                               const BasicDiagonalHamiltonian<Real>& hp)
{
    detail::require_same_register(state, hp);
    using C = std::complex<double>;
    const auto& psi = state.amplitudes;
    const auto& e = hp.energies;

    detail::BlockSum<double> a_acc;
    detail::BlockSum<double> chi_hp_chi;
    detail::BlockSum<double> chi_hd_phi;
    detail::BlockSum<double> chi_hp_phi;
    detail::BlockSum<C> phi_hd_phi;
    for (std::int64_t s = 0; s < state.dim(); ++s) {
        C chi = 0;
        C hd_phi = 0;
        for (int k = 0; k < state.n_qubits; ++k) {
            const std::int64_t t = s ^ (std::int64_t{1} << k);
            const C v(psi(t));
            chi += v;
            hd_phi += static_cast<double>(e(t)) * v;
        }
        const double es = static_cast<double>(e(s));
        const C phi = es * C(psi(s));
        const C chi_conj = std::conj(chi);
        a_acc.add((chi_conj * phi).imag());
        chi_hp_chi.add(es * std::norm(chi));
        chi_hd_phi.add((chi_conj * hd_phi).real());
        chi_hp_phi.add((chi_conj * (es * phi)).real());
        phi_hd_phi.add(std::conj(phi) * hd_phi);
    }

    CommutatorExpectations out;
    out.a = -2.0 * a_acc.value();
    out.b = chi_hp_chi.value() - chi_hd_phi.value();
    out.c = 2.0 * chi_hp_phi.value() - 2.0 * phi_hd_phi.value().real();
    out.imag_residue = std::abs(phi_hd_phi.value().imag());
    return out;
}

// Same layout as the energy cache with 2^n interleaved (re, im) doubles.
void save_amplitudes(const Statevector& state, const std::filesystem::path& path);
Statevector load_amplitudes(const std::filesystem::path& path);

} // namespace helix
