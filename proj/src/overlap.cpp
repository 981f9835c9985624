#include "helix/overlap.hpp"

#include "helix/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace helix {

int overlap_length(std::string_view from, std::string_view to)
{
    const std::size_t limit = std::min(from.size(), to.size());
    for (std::size_t k = limit; k >= 1; --k) {
        if (from.substr(from.size() - k) == to.substr(0, k)) {
            return static_cast<int>(k);
        }
    }
    return 0;
}

OverlapMatrix build_overlap_matrix(const ReadSet& reads)
{
    const int n = reads.size();
    if (n < 2) {
        throw ValidationError("overlap matrix needs at least 2 reads");
    }
    IntMatrix ov = IntMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                ov(i, j) = overlap_length(reads[i].sequence, reads[j].sequence);
            }
        }
    }
    return overlap_matrix_from(ov);
}

OverlapMatrix overlap_matrix_from(const IntMatrix& ov)
{
    if (ov.rows() != ov.cols()) {
        throw ValidationError("overlap matrix must be square");
    }
    if (ov.size() > 0 && ov.minCoeff() < 0) {
        throw ValidationError("overlap lengths must be non-negative");
    }
    OverlapMatrix m;
    m.ov = ov;
    m.ov.diagonal().setZero();
    m.w = -m.ov;
    return m;
}

std::string overlap_csv(const OverlapMatrix& m)
{
    std::ostringstream out;
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) {
            out << (j ? "," : "") << m.w(i, j);
        }
        out << '\n';
    }
    return out.str();
}

std::string overlap_json(const OverlapMatrix& m)
{
    nlohmann::ordered_json j;
    j["n"] = m.n();
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.n(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 0; k < m.n(); ++k) {
            row.push_back(m.w(i, k));
        }
        rows.push_back(std::move(row));
    }
    j["w"] = std::move(rows);
    return j.dump() + "\n";
}

} // namespace helix
