#include "helix/hamiltonian.hpp"

#include "helix/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace helix {
namespace {

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

constexpr std::array<char, 8> kEnergyMagic = {'H', 'L', 'X', 'E', 'N', 'R', 'G', '1'};

std::string human_bytes(double bytes)
{
    const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB", "PiB"};
    int u = 0;
    while (bytes >= 1024.0 && u < 5) {
        bytes /= 1024.0;
        ++u;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f %s", bytes, units[u]);
    return buf;
}

} // namespace

int max_qubits()
{
    if (const char* env = std::getenv("HELIX_MAX_QUBITS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 63) {
            return static_cast<int>(v);
        }
        throw ConfigError("HELIX_MAX_QUBITS must be an integer in 1..62, got '" + std::string(env) + "'");
    }
    return 26;
}

void check_qubit_budget(int n, int limit, const std::string& what)
{
    if (n < 1) {
        throw ConfigError(what + ": qubit count must be positive");
    }
    if (n > limit) {
        // energies (8 bytes) + amplitudes (16 bytes) per basis state
        const double bytes = 24.0 * std::ldexp(1.0, n);
        throw ResourceError(what + ": " + std::to_string(n) + " qubits exceeds the limit of " + std::to_string(limit)
                            + " (needs about " + human_bytes(bytes)
                            + " for energies and amplitudes; raise HELIX_MAX_QUBITS to override)");
    }
}

DiagonalHamiltonian materialize(const IsingHamiltonian& h, int limit)
{
    const int n = h.n_qubits;
    check_qubit_budget(n, limit, "materialize");

    DiagonalHamiltonian hp;
    hp.n_qubits = n;
    hp.energies.resize(std::int64_t{1} << n);

    // Full coupling rows with the strict upper triangle mirrored.
    Eigen::MatrixXd j = h.couplings.triangularView<Eigen::StrictlyUpper>();
    j += j.transpose().eval();

    // All spins up.
    hp.energies(0) = h.constant + h.fields.sum() + j.sum() / 2.0;

    // Grow the table one qubit at a time: states below 2^a have every spin
    // b >= a up, so flipping spin a changes the energy by -2 times its local field.
    for (int a = 0; a < n; ++a) {
        const std::int64_t half = std::int64_t{1} << a;
        double upper_field = h.fields(a);
        for (int b = a + 1; b < n; ++b) {
            upper_field += j(a, b);
        }
        for (std::int64_t s = 0; s < half; ++s) {
            double field = upper_field;
            for (int b = 0; b < a; ++b) {
                field += ((s >> b) & 1) ? -j(a, b) : j(a, b);
            }
            hp.energies(s | half) = hp.energies(s) - 2.0 * field;
        }
    }
    return hp;
}

bool GroundStateInfo::contains(std::uint64_t s) const
{
    return std::binary_search(minimizers.begin(), minimizers.end(), s);
}

void save_energies(const DiagonalHamiltonian& hp, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    const std::uint64_t n = static_cast<std::uint64_t>(hp.n_qubits);
    out.write(kEnergyMagic.data(), kEnergyMagic.size());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(hp.energies.data()),
              static_cast<std::streamsize>(hp.energies.size() * sizeof(double)));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

DiagonalHamiltonian load_energies(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::array<char, 8> magic{};
    std::uint64_t n = 0;
    in.read(magic.data(), magic.size());
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || magic != kEnergyMagic) {
        throw IoError(path.string() + ": not an energy cache file");
    }
    check_qubit_budget(static_cast<int>(n), max_qubits(), "load_energies");
    DiagonalHamiltonian hp;
    hp.n_qubits = static_cast<int>(n);
    hp.energies.resize(std::int64_t{1} << n);
    in.read(reinterpret_cast<char*>(hp.energies.data()),
            static_cast<std::streamsize>(hp.energies.size() * sizeof(double)));
    if (!in) {
        throw IoError(path.string() + ": truncated energy cache");
    }
    return hp;
}

} // namespace helix
