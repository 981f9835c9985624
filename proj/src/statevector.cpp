#include "helix/statevector.hpp"

#include "helix/error.hpp"

#include <array>
#include <fstream>

namespace helix {
namespace {

constexpr std::array<char, 8> kAmplitudeMagic = {'H', 'L', 'X', 'A', 'M', 'P', 'L', '1'};

} // namespace

void save_amplitudes(const Statevector& state, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    const std::uint64_t n = static_cast<std::uint64_t>(state.n_qubits);
    out.write(kAmplitudeMagic.data(), kAmplitudeMagic.size());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    // std::complex<double> is layout-compatible with double[2].
    out.write(reinterpret_cast<const char*>(state.amplitudes.data()),
              static_cast<std::streamsize>(state.amplitudes.size() * 2 * sizeof(double)));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

Statevector load_amplitudes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::array<char, 8> magic{};
    std::uint64_t n = 0;
    in.read(magic.data(), magic.size());
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || magic != kAmplitudeMagic) {
        throw IoError(path.string() + ": not an amplitude snapshot");
    }
    check_qubit_budget(static_cast<int>(n), max_qubits(), "load_amplitudes");
    Statevector state{static_cast<int>(n), ComplexVector<double>(std::int64_t{1} << n)};
    in.read(reinterpret_cast<char*>(state.amplitudes.data()),
            static_cast<std::streamsize>(state.amplitudes.size() * 2 * sizeof(double)));
    if (!in) {
        throw IoError(path.string() + ": truncated amplitude snapshot");
    }
    return state;
}

} // namespace helix
