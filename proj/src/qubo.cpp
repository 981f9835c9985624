#include "helix/qubo.hpp"

#include "helix/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace helix {
namespace {

void add_linear(Eigen::MatrixXd& q, int a, double value) { q(a, a) += value; }

void add_pair(Eigen::MatrixXd& q, int a, int b, double value)
{
    if (a == b) {
        q(a, a) += value;
    } else {
        q(a, b) += 0.5 * value;
        q(b, a) += 0.5 * value;
    }
}

// weight * (1 - sum_v x_v)^2 with x_v^2 = x_v:
// weight * (1 - sum_v x_v + 2 sum_{u<v} x_u x_v).
void add_exactly_one(Eigen::MatrixXd& q, double& offset, const std::vector<int>& vars, double weight)
{
    offset += weight;
    for (std::size_t u = 0; u < vars.size(); ++u) {
        add_linear(q, vars[u], -weight);
        for (std::size_t v = u + 1; v < vars.size(); ++v) {
            add_pair(q, vars[u], vars[v], 2.0 * weight);
        }
    }
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

PenaltyConfig PenaltyConfig::defaults_for(const OverlapMatrix& overlaps, double c)
{
    if (!(c > 0.0)) {
        throw ConfigError("overlap scale c must be positive");
    }
    const double bound = c * overlaps.max_abs_weight();
    return PenaltyConfig{2.0 * bound + 1.0, 2.0 * bound + 1.0, c};
}

PenaltyConfig PenaltyConfig::normalized_for(const OverlapMatrix& overlaps)
{
    const int m = overlaps.max_abs_weight();
    return defaults_for(overlaps, m > 0 ? 1.0 / m : 1.0);
}

void PenaltyConfig::validate(const OverlapMatrix& overlaps) const
{
    if (!(c > 0.0)) {
        throw ConfigError("overlap scale C must be positive, got " + format_number(c));
    }
    const double bound = c * overlaps.max_abs_weight();
    if (!(a > bound)) {
        throw ConfigError("penalty A = " + format_number(a) + " must exceed C*max|w| = " + format_number(bound));
    }
    if (!(b > bound)) {
        throw ConfigError("penalty B = " + format_number(b) + " must exceed C*max|w| = " + format_number(bound));
    }
}

int QuboInstance::slot_of(int read) const
{
    const auto it = std::find(free_reads.begin(), free_reads.end(), read);
    return it == free_reads.end() ? -1 : static_cast<int>(it - free_reads.begin());
}

QuboInstance build_qubo(const OverlapMatrix& overlaps, const PenaltyConfig& penalties, int fixed_read)
{
    const int n = overlaps.n();
    if (n < 2) {
        throw ValidationError("QUBO encoding needs at least 2 reads, got " + std::to_string(n));
    }
    if (fixed_read < 0 || fixed_read >= n) {
        throw ConfigError("fixed read " + std::to_string(fixed_read) + " out of range 0.." + std::to_string(n - 1));
    }
    penalties.validate(overlaps);

    QuboInstance inst;
    inst.n_reads = n;
    inst.fixed_read = fixed_read;
    inst.penalties = penalties;
    inst.overlaps = overlaps;
    for (int i = 0; i < n; ++i) {
        if (i != fixed_read) {
            inst.free_reads.push_back(i);
        }
    }
    const int m = n - 1;
    inst.q = Eigen::MatrixXd::Zero(m * m, m * m);

    // With x_{fixed,0} = 1 and every other x_{fixed,p}, x_{i,0} = 0 the
    // position-0 and fixed-read constraints vanish identically.
    for (int p = 1; p <= m; ++p) {
        std::vector<int> vars;
        for (int r = 0; r < m; ++r) {
            vars.push_back(inst.var_index(r, p));
        }
        add_exactly_one(inst.q, inst.offset, vars, penalties.a);
    }
    for (int r = 0; r < m; ++r) {
        std::vector<int> vars;
        for (int p = 1; p <= m; ++p) {
            vars.push_back(inst.var_index(r, p));
        }
        add_exactly_one(inst.q, inst.offset, vars, penalties.b);
    }

    // Boundary edge from the pinned read at position 0 into position 1.
    for (int r = 0; r < m; ++r) {
        add_linear(inst.q, inst.var_index(r, 1), penalties.c * overlaps.w(fixed_read, inst.free_reads[r]));
    }
    for (int p = 1; p + 1 <= m; ++p) {
        for (int ri = 0; ri < m; ++ri) {
            for (int rj = 0; rj < m; ++rj) {
                if (ri == rj) {
                    continue;
                }
                const double w = overlaps.w(inst.free_reads[ri], inst.free_reads[rj]);
                if (w != 0.0) {
                    add_pair(inst.q, inst.var_index(ri, p), inst.var_index(rj, p + 1), penalties.c * w);
                }
            }
        }
    }
    return inst;
}

double objective(const QuboInstance& q, const BinaryVector& x)
{
    if (x.size() != q.n_vars()) {
        throw ValidationError("assignment has " + std::to_string(x.size()) + " entries, instance has "
                              + std::to_string(q.n_vars()) + " variables");
    }
    const Eigen::VectorXd xd = x.cast<double>();
    return xd.dot(q.q * xd) + q.offset;
}

double objective(const QuboInstance& q, std::uint64_t bits)
{
    const int n = q.n_vars();
    double value = q.offset;
    for (int a = 0; a < n; ++a) {
        if (((bits >> a) & 1U) == 0) {
            continue;
        }
        value += q.q(a, a);
        for (int b = a + 1; b < n; ++b) {
            if ((bits >> b) & 1U) {
                value += q.q(a, b) + q.q(b, a);
            }
        }
    }
    return value;
}

BinaryVector encode_order(const QuboInstance& q, const std::vector<int>& order)
{
    if (static_cast<int>(order.size()) != q.n_reads || order.front() != q.fixed_read) {
        throw ValidationError("order must list all reads and start with the fixed read");
    }
    BinaryVector x = BinaryVector::Zero(q.n_vars());
    for (int p = 1; p < q.n_reads; ++p) {
        const int slot = q.slot_of(order[static_cast<std::size_t>(p)]);
        if (slot < 0) {
            throw ValidationError("fixed read appears twice in order");
        }
        x(q.var_index(slot, p)) = 1;
    }
    return x;
}

IsingHamiltonian qubo_to_ising(const QuboInstance& q, IsingConvention convention)
{
    const Eigen::MatrixXd& m = q.q;
    if (m.rows() != m.cols() || (m.size() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)) {
        throw ValidationError("QUBO matrix is not symmetric");
    }
    const int n = q.n_vars();
    IsingHamiltonian h;
    h.n_qubits = n;
    h.couplings = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            h.couplings(a, b) = 0.25 * (m(a, b) + m(b, a));
        }
    }
    h.fields = -0.5 * m.rowwise().sum();
    h.constant = 0.25 * m.sum() + 0.25 * m.trace() + q.offset;

    if (convention == IsingConvention::scaled) {
        h.couplings *= 4.0;
        h.fields *= 4.0;
        h.constant = 0.0;
    }
    return h;
}

double ising_energy(const IsingHamiltonian& h, std::uint64_t bits)
{
    double e = h.constant;
    for (int a = 0; a < h.n_qubits; ++a) {
        const double za = ((bits >> a) & 1U) ? -1.0 : 1.0;
        e += h.fields(a) * za;
        for (int b = a + 1; b < h.n_qubits; ++b) {
            const double zb = ((bits >> b) & 1U) ? -1.0 : 1.0;
            e += h.couplings(a, b) * za * zb;
        }
    }
    return e;
}

std::string ising_json(const IsingHamiltonian& h)
{
    nlohmann::ordered_json j;
    j["n_qubits"] = h.n_qubits;
    auto terms = nlohmann::ordered_json::array();
    for (int a = 0; a < h.n_qubits; ++a) {
        for (int b = a + 1; b < h.n_qubits; ++b) {
            if (h.couplings(a, b) != 0.0) {
                terms.push_back({a, b, h.couplings(a, b)});
            }
        }
    }
    j["J"] = std::move(terms);
    j["h"] = std::vector<double>(h.fields.data(), h.fields.data() + h.fields.size());
    j["constant"] = h.constant;
    return j.dump() + "\n";
}

std::string qubo_json(const QuboInstance& q)
{
    nlohmann::ordered_json j;
    j["n_reads"] = q.n_reads;
    j["fixed_read"] = q.fixed_read;
    j["free_reads"] = q.free_reads;
    j["n_vars"] = q.n_vars();
    j["penalties"] = {{"A", q.penalties.a}, {"B", q.penalties.b}, {"C", q.penalties.c}};
    auto rows = nlohmann::ordered_json::array();
    for (int a = 0; a < q.n_vars(); ++a) {
        auto row = nlohmann::ordered_json::array();
        for (int b = 0; b < q.n_vars(); ++b) {
            row.push_back(q.q(a, b));
        }
        rows.push_back(std::move(row));
    }
    j["Q"] = std::move(rows);
    j["offset"] = q.offset;
    return j.dump() + "\n";
}

std::string ising_pauli_text(const IsingHamiltonian& h)
{
    std::ostringstream out;
    for (int a = 0; a < h.n_qubits; ++a) {
        for (int b = a + 1; b < h.n_qubits; ++b) {
            if (h.couplings(a, b) != 0.0) {
                out << 'Z' << a << " Z" << b << "  " << format_number(h.couplings(a, b)) << '\n';
            }
        }
    }
    for (int a = 0; a < h.n_qubits; ++a) {
        if (h.fields(a) != 0.0) {
            out << 'Z' << a << "  " << format_number(h.fields(a)) << '\n';
        }
    }
    out << "I  " << format_number(h.constant) << '\n';
    return out.str();
}

} // namespace helix
