#include "qburgers/resources.hpp"

#include <cmath>
#include <ostream>

#include "qburgers/errors.hpp"
#include "qburgers/io.hpp"
#include "qburgers/numeric.hpp"

namespace qburgers {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

const std::vector<std::string> kCountNames{
    "initial_encoding", "sparse_access_A",  "gates_evolution",
    "sparse_access_Ctilde", "gates_Ctilde", "gates_C2"};

} // namespace

CostBudget cost_table(int n, int n_x, int m, double tau, double norm_ratio, double eps) {
    if (n < 2) throw DomainError("cost_table: n must be >= 2");
    if (n_x < 1) throw DomainError("cost_table: n_x must be >= 1");
    if (m < 0 || m > n_x) throw DomainError("cost_table: m must lie in [0, n_x]");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("cost_table: eps must lie in (0, 1)");
    if (tau < 0.0) throw DomainError("cost_table: tau must be >= 0");
    if (!(norm_ratio > 0.0)) throw DomainError("cost_table: norm_ratio must be positive");

    CostBudget b;
    b.n = n;
    b.n_x = n_x;
    b.m = m;
    b.tau = tau;
    b.norm_ratio = norm_ratio;
    b.eps = eps;

    const double F = std::exp2(0.5 * static_cast<double>((n - 2) * m));
    const double Q = F / eps;  // overlap-estimation queries
    const double evo_polylog = log_pow(1.0 / eps, 2.0);
    const double gate_tail = static_cast<double>(n_x) + log_pow(tau / eps, 2.5);

    b.counts["initial_encoding"] = Q * n * norm_ratio;
    b.counts["sparse_access_A"] = Q * n * norm_ratio * tau * evo_polylog;
    b.counts["gates_evolution"] = b.counts["sparse_access_A"] * gate_tail;
    if (n >= 3) {
        b.counts["sparse_access_Ctilde"] = Q;
        b.counts["gates_Ctilde"] =
            Q * (static_cast<double>(n) * n_x + log_pow(factorial(n) / eps, 2.5));
    } else {
        b.counts["gates_C2"] = static_cast<double>(n_x) * static_cast<double>(n_x) / eps;
    }

    b.total = F * n * norm_ratio * (tau / eps) * evo_polylog * gate_tail;
    b.ancilla = gate_tail;
    b.classical_baseline = std::exp2(2.0 * n_x);
    b.exceeds_classical = b.total > b.classical_baseline;
    b.error_budget = (n >= 3 ? 4.0 : 3.0) * eps;
    return b;
}

CrossoverTable crossover_scan(int n, int m, double tau, double norm_ratio, double eps,
                              const std::vector<int>& n_x_range, bool tie_m_to_n_x) {
    if (n_x_range.empty()) throw DomainError("crossover_scan: empty n_x range");

    CrossoverTable t;
    for (int n_x : n_x_range) {
        const CostBudget b =
            cost_table(n, n_x, tie_m_to_n_x ? n_x : m, tau, norm_ratio, eps);
        CrossoverRow row;
        row.n_x = n_x;
        row.quantum_total = b.total;
        row.classical = b.classical_baseline;
        row.quantum_wins = b.total < b.classical_baseline;
        if (row.quantum_wins && t.first_advantage_n_x < 0) t.first_advantage_n_x = n_x;
        t.rows.push_back(row);
    }
    return t;
}

void write_cost_csv(std::ostream& os, const std::vector<CostBudget>& rows) {
    std::vector<std::string> header{"n", "n_x", "m", "tau", "norm_ratio", "eps"};
    header.insert(header.end(), kCountNames.begin(), kCountNames.end());
    header.insert(header.end(), {"total", "ancilla", "classical_baseline",
                                 "exceeds_classical", "error_budget"});
    os << csv_join(header) << '\n';

    for (const auto& b : rows) {
        std::vector<std::string> cells{std::to_string(b.n),   std::to_string(b.n_x),
                                       std::to_string(b.m),   format_g17(b.tau),
                                       format_g17(b.norm_ratio), format_g17(b.eps)};
        for (const auto& name : kCountNames) {
            auto it = b.counts.find(name);
            cells.push_back(it == b.counts.end() ? std::string() : format_g17(it->second));
        }
        cells.push_back(format_g17(b.total));
        cells.push_back(format_g17(b.ancilla));
        cells.push_back(format_g17(b.classical_baseline));
        cells.push_back(b.exceeds_classical ? "1" : "0");
        cells.push_back(format_g17(b.error_budget));
        os << csv_join(cells) << '\n';
    }
}

nlohmann::json cost_to_json(const std::vector<CostBudget>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : rows) {
        arr.push_back({{"n", b.n},
                       {"n_x", b.n_x},
                       {"m", b.m},
                       {"tau", b.tau},
                       {"norm_ratio", b.norm_ratio},
                       {"eps", b.eps},
                       {"counts", b.counts},
                       {"total", b.total},
                       {"ancilla", b.ancilla},
                       {"classical_baseline", b.classical_baseline},
                       {"exceeds_classical", b.exceeds_classical},
                       {"error_budget", b.error_budget}});
    }
    return arr;
}

void write_crossover_csv(std::ostream& os, const CrossoverTable& table) {
    os << "n_x,quantum_total,classical,quantum_wins\n";
    for (const auto& r : table.rows)
        os << csv_join({std::to_string(r.n_x), format_g17(r.quantum_total),
                        format_g17(r.classical), r.quantum_wins ? "1" : "0"})
           << '\n';
}

nlohmann::json crossover_to_json(const CrossoverTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"n_x", r.n_x},
                        {"quantum_total", r.quantum_total},
                        {"classical", r.classical},
                        {"quantum_wins", r.quantum_wins}});
    return {{"rows", rows}, {"first_advantage_n_x", table.first_advantage_n_x}};
}

} // namespace qburgers
