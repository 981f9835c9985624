#include "helix/decode.hpp"

#include "helix/error.hpp"

#include <algorithm>
#include <numeric>

namespace helix {
namespace {

void require_permutation(const std::vector<int>& order, int n)
{
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    if (static_cast<int>(order.size()) != n) {
        throw ValidationError("order has " + std::to_string(order.size()) + " entries for " + std::to_string(n)
                              + " reads");
    }
    for (const int r : order) {
        if (r < 0 || r >= n || seen[static_cast<std::size_t>(r)]++) {
            throw ValidationError("order " + format_order(order) + " is not a permutation of 0.." + std::to_string(n - 1));
        }
    }
}

std::string join(const std::vector<int>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + std::to_string(v[i]);
    }
    return out;
}

// Walks every order with `fixed` first and hands (order, total) to `visit`.
template <typename Visit>
void for_each_order(const OverlapMatrix& overlaps, int fixed, Visit&& visit)
{
    const int n = overlaps.n();
    if (n > kBruteForceLimit) {
        throw ConfigError("brute force refuses " + std::to_string(n) + " reads (limit " + std::to_string(kBruteForceLimit)
                          + ", " + std::to_string(n - 1) + "! orders)");
    }
    if (n < 2) {
        throw ValidationError("brute force needs at least two reads");
    }
    if (fixed < 0 || fixed >= n) {
        throw ConfigError("fixed read " + std::to_string(fixed) + " out of range 0.." + std::to_string(n - 1));
    }
    std::vector<int> rest;
    for (int r = 0; r < n; ++r) {
        if (r != fixed) {
            rest.push_back(r);
        }
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    order[0] = fixed;
    do {
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        visit(order, total_overlap(overlaps, order));
    } while (std::next_permutation(rest.begin(), rest.end()));
}

} // namespace

std::string format_order(const std::vector<int>& order) { return "[" + join(order) + "]"; }

std::string ConstraintViolation::describe() const
{
    std::string out;
    auto part = [&](const char* what, const std::vector<int>& v) {
        if (!v.empty()) {
            out += (out.empty() ? "" : "; ") + std::string(what) + " " + join(v);
        }
    };
    part("empty positions", empty_positions);
    part("positions with several reads", crowded_positions);
    part("unplaced reads", unplaced_reads);
    part("reads placed more than once", duplicated_reads);
    return out;
}

Decoded decode_bitstring(std::uint64_t s, const QuboInstance& q)
{
    const int m = q.positions();
    std::vector<int> at_position(static_cast<std::size_t>(m + 1), -1);
    std::vector<int> per_position(static_cast<std::size_t>(m + 1), 0);
    ConstraintViolation bad;

    for (int slot = 0; slot < m; ++slot) {
        int placed = 0;
        for (int p = 1; p <= m; ++p) {
            if ((s >> q.var_index(slot, p)) & 1U) {
                ++placed;
                ++per_position[static_cast<std::size_t>(p)];
                at_position[static_cast<std::size_t>(p)] = q.free_reads[static_cast<std::size_t>(slot)];
            }
        }
        if (placed == 0) {
            bad.unplaced_reads.push_back(q.free_reads[static_cast<std::size_t>(slot)]);
        } else if (placed > 1) {
            bad.duplicated_reads.push_back(q.free_reads[static_cast<std::size_t>(slot)]);
        }
    }
    for (int p = 1; p <= m; ++p) {
        if (per_position[static_cast<std::size_t>(p)] == 0) {
            bad.empty_positions.push_back(p);
        } else if (per_position[static_cast<std::size_t>(p)] > 1) {
            bad.crowded_positions.push_back(p);
        }
    }
    if (!bad.empty_positions.empty() || !bad.crowded_positions.empty() || !bad.unplaced_reads.empty()
        || !bad.duplicated_reads.empty()) {
        std::sort(bad.unplaced_reads.begin(), bad.unplaced_reads.end());
        std::sort(bad.duplicated_reads.begin(), bad.duplicated_reads.end());
        return bad;
    }

    Placement out;
    out.order.push_back(q.fixed_read);
    out.order.insert(out.order.end(), at_position.begin() + 1, at_position.end());
    out.total_overlap = total_overlap(q.overlaps, out.order);
    return out;
}

int total_overlap(const OverlapMatrix& overlaps, const std::vector<int>& order)
{
    int total = 0;
    for (std::size_t t = 1; t < order.size(); ++t) {
        total += overlaps.ov(order[t - 1], order[t]);
    }
    return total;
}

std::string merge_sequence(const ReadSet& reads, const std::vector<int>& order)
{
    require_permutation(order, reads.size());
    std::string out = reads[order.front()].sequence;
    for (std::size_t t = 1; t < order.size(); ++t) {
        const std::string& next = reads[order[t]].sequence;
        const int k = overlap_length(reads[order[t - 1]].sequence, next);
        out.append(next, static_cast<std::size_t>(k), std::string::npos);
    }
    return out;
}

AssemblyResult assemble(const ReadSet& reads, const OverlapMatrix& overlaps, const Decoded& decoded)
{
    AssemblyResult out;
    if (const auto* p = std::get_if<Placement>(&decoded)) {
        out.order = p->order;
        out.total_overlap = total_overlap(overlaps, p->order);
        out.sequence = merge_sequence(reads, p->order);
        out.valid = true;
    }
    return out;
}

Placement brute_force_best(const OverlapMatrix& overlaps, int fixed_read)
{
    Placement best;
    best.total_overlap = -1;
    // Orders arrive in lexicographic order, so a strict improvement keeps the
    // smallest tied order.
    for_each_order(overlaps, fixed_read, [&](const std::vector<int>& order, int total) {
        if (total > best.total_overlap) {
            best.order = order;
            best.total_overlap = total;
        }
    });
    return best;
}

std::vector<std::vector<int>> brute_force_optima(const OverlapMatrix& overlaps, int fixed_read)
{
    std::vector<std::vector<int>> optima;
    int best = -1;
    for_each_order(overlaps, fixed_read, [&](const std::vector<int>& order, int total) {
        if (total > best) {
            best = total;
            optima.clear();
        }
        if (total == best) {
            optima.push_back(order);
        }
    });
    return optima;
}

std::string assembly_fasta(const AssemblyResult& result, const std::string& name)
{
    if (!result.valid) {
        throw ValidationError("cannot write an invalid assembly as FASTA");
    }
    std::string out = ">" + name + " order=" + join(result.order) + " total_overlap=" + std::to_string(result.total_overlap)
                      + " length=" + std::to_string(result.sequence.size()) + "\n";
    for (std::size_t i = 0; i < result.sequence.size(); i += 60) {
        out += result.sequence.substr(i, 60);
        out += '\n';
    }
    return out;
}

} // namespace helix
