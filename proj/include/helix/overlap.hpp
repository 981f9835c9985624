#pragma once

#include "helix/reads.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>

namespace helix {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Pairwise suffix-prefix overlaps. `ov(i, j)` is the raw overlap length,
/// `w(i, j) = -ov(i, j)` the edge weight; both have a zero diagonal.
struct OverlapMatrix {
    IntMatrix ov;
    IntMatrix w;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(ov.rows()); }
    [[nodiscard]] int max_abs_weight() const { return ov.size() == 0 ? 0 : ov.maxCoeff(); }
};

/// Largest k such that the length-k suffix of `from` equals the length-k
/// prefix of `to`; 0 when there is none.
int overlap_length(std::string_view from, std::string_view to);

OverlapMatrix build_overlap_matrix(const ReadSet& reads);

/// Builds the matrix from explicit overlap lengths (diagonal is ignored).
OverlapMatrix overlap_matrix_from(const IntMatrix& ov);

std::string overlap_csv(const OverlapMatrix& m);
std::string overlap_json(const OverlapMatrix& m);

} // namespace helix
