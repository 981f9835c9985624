#pragma once

#include "helix/overlap.hpp"
#include "helix/qubo.hpp"
#include "helix/reads.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace helix {

/// A one-hot-consistent basis state read back as an order of reads.
struct Placement {
    std::vector<int> order;
    int total_overlap = 0;
};

/// Why a basis state is not a valid placement. Positions are free positions
/// (1..N-1); reads are original read indices.
struct ConstraintViolation {
    std::vector<int> empty_positions;
    std::vector<int> crowded_positions;
    std::vector<int> unplaced_reads;
    std::vector<int> duplicated_reads;

    [[nodiscard]] std::string describe() const;
};

using Decoded = std::variant<Placement, ConstraintViolation>;

Decoded decode_bitstring(std::uint64_t s, const QuboInstance& q);

struct AssemblyResult {
    std::vector<int> order;
    std::string sequence;
    int total_overlap = 0;
    bool valid = false;
};

int total_overlap(const OverlapMatrix& overlaps, const std::vector<int>& order);

/// Concatenates reads along `order`, dropping the overlapping characters at
/// each junction.
std::string merge_sequence(const ReadSet& reads, const std::vector<int>& order);

/// Valid placements are merged; violations give valid == false and no sequence.
AssemblyResult assemble(const ReadSet& reads, const OverlapMatrix& overlaps, const Decoded& decoded);

/// Largest read count the permutation oracle accepts.
inline constexpr int kBruteForceLimit = 10;

/// Best order starting with `fixed_read` over all (N-1)! candidates; ties go to
/// the lexicographically smallest order.
Placement brute_force_best(const OverlapMatrix& overlaps, int fixed_read = 0);

/// Every order starting with `fixed_read` that attains the optimum, ascending.
std::vector<std::vector<int>> brute_force_optima(const OverlapMatrix& overlaps, int fixed_read = 0);

/// Single FASTA record, 60 columns per line.
std::string assembly_fasta(const AssemblyResult& result, const std::string& name);

std::string format_order(const std::vector<int>& order);

} // namespace helix
