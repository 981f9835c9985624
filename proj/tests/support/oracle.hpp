#pragma once

// Reference implementations used only by the tests. Everything here is
// written the slow, obvious way so it shares no code path with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline int naive_overlap(const std::string& from, const std::string& to)
{
    int best = 0;
    const int limit = static_cast<int>(std::min(from.size(), to.size()));
    for (int k = 1; k <= limit; ++k) {
        bool match = true;
        for (int t = 0; t < k; ++t) {
            match = match && from[from.size() - k + t] == to[t];
        }
        if (match) {
            best = k;
        }
    }
    return best;
}

inline CMat pauli_x(int n, int k)
{
    const Eigen::Matrix2cd x{{0, 1}, {1, 0}};
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    CMat out = CMat::Identity(1, 1);
    // Qubit 0 is the least significant bit, so it is the rightmost factor.
    for (int q = n - 1; q >= 0; --q) {
        const Eigen::Matrix2cd& f = q == k ? x : id;
        CMat next(out.rows() * 2, out.cols() * 2);
        for (int r = 0; r < out.rows(); ++r) {
            for (int c = 0; c < out.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
            }
        }
        out = next;
    }
    return out;
}

inline CMat driver(int n)
{
    CMat h = CMat::Zero(std::int64_t{1} << n, std::int64_t{1} << n);
    for (int k = 0; k < n; ++k) {
        h += pauli_x(n, k);
    }
    return h;
}

inline CMat diagonal(const Eigen::VectorXd& e) { return e.cast<std::complex<double>>().asDiagonal(); }

/// exp(-i t H) for Hermitian H by eigendecomposition.
inline CMat evolve(const CMat& h, double t)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct Commutators {
    std::complex<double> a;
    std::complex<double> b;
    std::complex<double> c;
};

/// i<[Hd,Hp]>, 1/2 <[[Hd,Hp],Hd]>, <[[Hd,Hp],Hp]> with explicit matrices.
inline Commutators commutators(const CMat& hd, const CMat& hp, const CVec& psi)
{
    const CMat k = hd * hp - hp * hd;
    const std::complex<double> i(0, 1);
    Commutators out;
    out.a = i * psi.dot(k * psi);
    out.b = 0.5 * psi.dot((k * hd - hd * k) * psi);
    out.c = psi.dot((k * hp - hp * k) * psi);
    return out;
}

inline CVec random_state(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CVec v(std::int64_t{1} << n);
    for (auto& z : v) {
        z = {g(rng), g(rng)};
    }
    return v / v.norm();
}

struct Ising {
    Eigen::MatrixXd j; // strict upper triangle
    Eigen::VectorXd h;
    double constant = 0.0;
};

inline Ising random_ising(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Ising out{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd(n), u(rng)};
    for (int a = 0; a < n; ++a) {
        out.h(a) = u(rng);
        for (int b = a + 1; b < n; ++b) {
            out.j(a, b) = u(rng);
        }
    }
    return out;
}

inline int spin(std::uint64_t s, int a) { return ((s >> a) & 1U) ? -1 : 1; }

inline double ising_energy(const Ising& m, std::uint64_t s)
{
    const int n = static_cast<int>(m.h.size());
    double e = m.constant;
    for (int a = 0; a < n; ++a) {
        e += m.h(a) * spin(s, a);
        for (int b = a + 1; b < n; ++b) {
            e += m.j(a, b) * spin(s, a) * spin(s, b);
        }
    }
    return e;
}

inline Eigen::VectorXd ising_spectrum(const Ising& m)
{
    const int n = static_cast<int>(m.h.size());
    Eigen::VectorXd e(std::int64_t{1} << n);
    for (std::int64_t s = 0; s < e.size(); ++s) {
        e(s) = ising_energy(m, static_cast<std::uint64_t>(s));
    }
    return e;
}

/// The assembly objective evaluated straight from its definition: x[read][pos]
/// with `fixed` pinned at position 0 and the free variables read from `bits`
/// in the slot-major layout.
inline double assembly_energy(const Eigen::MatrixXi& w, double pa, double pb, double pc, int fixed, std::uint64_t bits)
{
    const int n = static_cast<int>(w.rows());
    std::vector<std::vector<int>> x(n, std::vector<int>(n, 0));
    x[fixed][0] = 1;
    int slot = 0;
    for (int r = 0; r < n; ++r) {
        if (r == fixed) {
            continue;
        }
        for (int p = 1; p < n; ++p) {
            x[r][p] = static_cast<int>((bits >> (slot * (n - 1) + (p - 1))) & 1U);
        }
        ++slot;
    }
    double e = 0.0;
    for (int p = 1; p < n; ++p) {
        int sum = 0;
        for (int r = 0; r < n; ++r) {
            sum += x[r][p];
        }
        e += pa * (1 - sum) * (1 - sum);
    }
    for (int r = 0; r < n; ++r) {
        if (r == fixed) {
            continue;
        }
        int sum = 0;
        for (int p = 1; p < n; ++p) {
            sum += x[r][p];
        }
        e += pb * (1 - sum) * (1 - sum);
    }
    for (int p = 0; p + 1 < n; ++p) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) {
                    e += pc * w(i, j) * x[i][p] * x[j][p + 1];
                }
            }
        }
    }
    return e;
}

/// Every order starting with `fixed` by plain recursion, with its total overlap.
inline void orders(const Eigen::MatrixXi& ov, int fixed, std::vector<std::pair<std::vector<int>, int>>& out)
{
    const int n = static_cast<int>(ov.rows());
    std::vector<int> cur{fixed};
    std::vector<bool> used(n, false);
    used[fixed] = true;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == n) {
            int t = 0;
            for (int k = 1; k < n; ++k) {
                t += ov(cur[k - 1], cur[k]);
            }
            out.emplace_back(cur, t);
            return;
        }
        for (int r = 0; r < n; ++r) {
            if (!used[r]) {
                used[r] = true;
                cur.push_back(r);
                self(self);
                cur.pop_back();
                used[r] = false;
            }
        }
    };
    rec(rec);
}

/// Bits of the one-hot encoding of `order` in the slot-major layout.
inline std::uint64_t encode(const std::vector<int>& order, int fixed)
{
    const int n = static_cast<int>(order.size());
    std::uint64_t bits = 0;
    for (int p = 1; p < n; ++p) {
        const int r = order[p];
        const int slot = r < fixed ? r : r - 1;
        bits |= std::uint64_t{1} << (slot * (n - 1) + (p - 1));
    }
    return bits;
}

} // namespace oracle
