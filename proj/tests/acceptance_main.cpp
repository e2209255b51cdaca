// Exit-gate checks for the whole pipeline.  Each criterion prints one
// PASS/FAIL line with its runtime and a short measurement summary; the
// process exit code is the number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qburgers/config.hpp"
#include "qburgers/correlators.hpp"
#include "qburgers/errors.hpp"
#include "qburgers/fields.hpp"
#include "qburgers/heat.hpp"
#include "qburgers/qstate.hpp"
#include "qburgers/reference.hpp"
#include "qburgers/resources.hpp"
#include "qburgers/rng.hpp"

using namespace qburgers;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - mean) * (x - mean);
    return std::sqrt(s2 / static_cast<double>(v.size() - 1));
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, ap);
    va_end(ap);
    return buf;
}

// ---- criterion 1: seed-median flatness settles at the single-mode value ----

Outcome flatness_asymptote() {
    const GridSpec g = GridSpec::make(7, 1.0);
    const PhysicsParams phys;
    std::vector<double> be, ba, gap;
    for (std::uint64_t seed = 1; seed <= 24; ++seed) {
        const FlatnessSeries f = run_figure2(g, RandomIC{0.3, 5, seed}, phys, {0.02});
        be.push_back(f.beta_exact[0]);
        ba.push_back(f.beta_approx[0]);
        gap.push_back(std::abs(f.beta_exact[0] - f.beta_approx[0]));
    }
    const double mbe = median(be), mba = median(ba), mgap = median(gap);
    const bool pass =
        std::abs(mbe + 1.5) < 0.2 && std::abs(mba + 1.5) < 0.2 && mgap < 0.05;
    return {pass, fmt("24 seeds at tau=0.02: median beta_exact=%.4f beta_approx=%.4f "
                      "gap=%.2e (want both within 0.2 of -1.5, gap < 0.05)",
                      mbe, mba, mgap)};
}

// ---- criterion 2: small-amplitude flatness series truncation ----

Outcome series_truncation() {
    const GridSpec g = GridSpec::make(10, 1.0);
    const PhysicsParams phys;
    const std::vector<double> deltas{0.05, 0.1, 0.2};
    std::map<double, double> err;
    bool within = true;
    for (double delta : deltas) {
        const PlaneWaveIC ic{delta, 1};
        const PsiField psi = analytic_psi_plane_wave(ic, g, phys, 0.0);
        const double beta_num = flatness(cole_hopf_inverse_exact(psi, phys));
        const double beta_ser = analytic_beta_plane_wave(ic, g, 0.0);
        err[delta] = std::abs(beta_num - beta_ser);
        within = within && err[delta] < 5.0 * std::pow(delta, 4.0);
    }
    const double shrink1 = err[0.2] / err[0.1];
    const double shrink2 = err[0.1] / err[0.05];
    const bool quartic = shrink1 > 12.0 && shrink1 < 20.0 && shrink2 > 12.0 &&
                         shrink2 < 20.0;
    return {within && quartic,
            fmt("err(0.05)=%.2e err(0.1)=%.2e err(0.2)=%.2e shrink=%.1f,%.1f "
                "(want err < 5 delta^4, shrink in [12,20])",
                err[0.05], err[0.1], err[0.2], shrink1, shrink2)};
}

// ---- criterion 3: register pipeline equals brute-force coarse ratios ----

VelocityField coarse_field(const PsiField& psi0, double tau, int m) {
    const GridSpec& g = psi0.grid;
    std::vector<double> v = heat_evolve(derivative(psi0).values, g, tau);
    for (double& x : v) x = -x;
    const std::size_t block = g.N_x >> m;
    const double w = 1.0 / std::sqrt(static_cast<double>(block));
    std::vector<double> cg(std::size_t{1} << m, 0.0);
    for (std::size_t k = 0; k < cg.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < block; ++j) sum += v[k * block + j];
        cg[k] = w * sum;
    }
    return VelocityField{GridSpec::make(m, g.L), std::move(cg)};
}

std::vector<std::vector<long long>> offset_sweep(int n, int m) {
    const long long top = (1LL << m) - 1;
    switch (n) {
        case 2: return {{0}, {1}, {2}};
        case 3: return {{0, 0}, {1, 2}, {1, top}, {2, 1}};
        default: return {{0, 0, 0}, {1, 2, 3}, {1, 2, top}};
    }
}

Outcome pipeline_vs_brute_force() {
    const ReadoutNoise exact{};
    const double tau = 2.0;
    double worst = 0.0;
    int rows = 0;
    for (int n : {2, 3, 4}) {
        for (int n_x : {6, 8, 10}) {
            for (int m : {2, 3, 5}) {
                const GridSpec g = GridSpec::make(n_x, 1.0);
                for (int i = 0; i < 10; ++i) {
                    const std::uint64_t seed =
                        1000ULL * static_cast<std::uint64_t>(n) +
                        100ULL * static_cast<std::uint64_t>(n_x) +
                        10ULL * static_cast<std::uint64_t>(m) +
                        static_cast<std::uint64_t>(i);
                    const PsiField psi0 = make_random_ic(g, RandomIC{0.3, 3, seed});
                    AmplitudeState s = amplitude_encode(derivative(psi0));
                    s = apply_propagator(s, tau);
                    s = negate_to_velocity(s);
                    s = coarse_grain(s, m);
                    const AmplitudeState U = build_U_n(s, n);
                    const VelocityField cf = coarse_field(psi0, tau, m);
                    const double den =
                        brute_force_Pn(cf, std::vector<long long>(n - 1, 0));
                    for (const auto& rho : offset_sweep(n, m)) {
                        const double quantum =
                            ratio_Pn_over_In(U, n, m, rho, exact).rows.front().ratio;
                        const double classical = brute_force_Pn(cf, rho) / den;
                        worst = std::max(worst, std::abs(quantum - classical));
                        ++rows;
                    }
                }
            }
        }
    }
    return {worst <= 1e-10, fmt("%d ratio rows over n in {2,3,4}, n_x in {6,8,10}, "
                                "m in {2,3,5}: worst |quantum - classical| = %.2e "
                                "(want <= 1e-10)",
                                rows, worst)};
}

// ---- criterion 4: propagator and its unitary dilation ----

Outcome propagator_suite() {
    std::string notes;
    bool pass = true;

    // Spectral route vs dense eigendecomposition, both boundary types.
    for (BoundaryCondition bc : {BoundaryCondition::Periodic, BoundaryCondition::Dirichlet}) {
        const GridSpec g = GridSpec::make(6, 1.0, bc);
        Rng rng(401);
        std::vector<double> x(g.N_x);
        for (double& v : x) v = rng.normal();
        double nx = 0.0;
        for (double v : x) nx += v * v;
        nx = std::sqrt(nx);
        for (double& v : x) v /= nx;

        const Eigen::MatrixXd A = build_laplacian(g).dense();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        const Eigen::VectorXd expd = (es.eigenvalues().array() * 5.0).exp();
        Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        const Eigen::VectorXd want =
            es.eigenvectors() * expd.asDiagonal() * es.eigenvectors().transpose() * v;
        const std::vector<double> got = heat_evolve(x, g, 5.0);
        double diff = 0.0;
        for (std::size_t j = 0; j < g.N_x; ++j)
            diff = std::max(diff, std::abs(got[j] - want[static_cast<Eigen::Index>(j)]));
        pass = pass && diff < 1e-12;
        if (bc == BoundaryCondition::Periodic) notes += fmt("expm=%.1e ", diff);
    }

    // Semigroup composition and mean conservation on the periodic ring.
    {
        const GridSpec g = GridSpec::make(6, 1.0);
        const PsiField psi0 = make_random_ic(g, RandomIC{0.4, 4, 402});
        const PsiField once = propagate(psi0, 1.5);
        const PsiField twice = propagate(propagate(psi0, 0.4), 1.1);
        double diff = 0.0;
        for (std::size_t j = 0; j < g.N_x; ++j)
            diff = std::max(diff, std::abs(once.values[j] - twice.values[j]));
        pass = pass && diff < 1e-12;
        notes += fmt("semigroup=%.1e ", diff);
        const double mdiff = std::abs(once.mean() - psi0.mean());
        pass = pass && mdiff < 1e-12;
        notes += fmt("mean=%.1e ", mdiff);
    }

    // Operator norm bound and the dilation structure.
    {
        double norm_bound = 0.0;
        for (int n_x = 1; n_x <= 6; ++n_x) {
            const LaplacianMatrix A = build_laplacian(GridSpec::make(n_x, 1.0));
            norm_bound = std::max(
                norm_bound, A.dense().selfadjointView<Eigen::Lower>().operatorNorm());
        }
        pass = pass && norm_bound <= 4.0 + 1e-12;
        notes += fmt("|A|=%.3f ", norm_bound);

        const GridSpec g = GridSpec::make(5, 1.0);
        const LaplacianMatrix A = build_laplacian(g);
        const UnitaryDilation U = block_encode(A, 0.0);
        const auto N = static_cast<Eigen::Index>(g.N_x);
        const double top_left =
            (U.matrix.topLeftCorner(N, N) - A.dense() / U.alpha).cwiseAbs().maxCoeff();
        const double defect =
            (U.matrix.transpose() * U.matrix -
             Eigen::MatrixXd::Identity(2 * N, 2 * N))
                .cwiseAbs()
                .maxCoeff();
        pass = pass && top_left < 1e-12 && defect < 1e-12;
        notes += fmt("dilation=%.1e defect=%.1e", top_left, defect);
    }
    return {pass, notes + " (want 1e-12 agreements, |A| <= 4)"};
}

// ---- criterion 5: readout noise levels match their targets ----

Outcome readout_calibration() {
    const GridSpec g = GridSpec::make(5, 1.0);
    const PsiField psi0 = make_random_ic(g, RandomIC{0.3, 3, 501});
    const AmplitudeState s = negate_to_velocity(amplitude_encode(derivative(psi0)));
    const SparseCorrelator C = build_C2(g, 3);
    const double truth = expectation(s, C, ReadoutNoise{});
    const double eps3 = 0.01;
    const int repeats = 10000;

    std::vector<double> gauss(repeats), shot(repeats);
    for (int k = 0; k < repeats; ++k) {
        gauss[static_cast<std::size_t>(k)] = expectation(
            s, C,
            ReadoutNoise{ReadoutMode::Gaussian, eps3, 0,
                         static_cast<std::uint64_t>(k)});
        shot[static_cast<std::size_t>(k)] = expectation(
            s, C,
            ReadoutNoise{ReadoutMode::Shot, 0.0, 10000,
                         static_cast<std::uint64_t>(k)});
    }
    const double sg = sample_std(gauss);
    const double ss = sample_std(shot);
    // Shot sampling at 1/eps3^2 single-shot repetitions targets the same
    // additive error, shaved by the Bernoulli variance factor.
    const bool pass = sg > 0.5 * eps3 && sg < 2.0 * eps3 && ss > 0.5 * eps3 &&
                      ss < 2.0 * eps3;
    return {pass, fmt("10^4 repeats, truth=%.3f: gaussian std=%.2e shot std=%.2e "
                      "(want both within 2x of eps3=%.0e)",
                      truth, sg, ss, eps3)};
}

// ---- criterion 6: cost-model structure ----

double tail(double x, double p) {  // clamped polylog tail
    const double l = std::log(x);
    return l > 0.0 ? std::pow(l, p) : 0.0;
}

Outcome cost_model() {
    // (a) independent re-evaluation of every reported quantity.
    Rng rng(601);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 4.0);
        const int n_x = 4 + static_cast<int>(rng.uniform01() * 12.0);
        const int m = 1 + static_cast<int>(rng.uniform01() * static_cast<double>(n_x - 1));
        const double t = 0.1 + 9.9 * rng.uniform01();
        const double R = 1.0 + 2.0 * rng.uniform01();
        const double eps = std::pow(10.0, -4.0 * rng.uniform01()) * 0.5;
        const CostBudget c = cost_table(n, n_x, m, t, R, eps);

        const double F = std::exp2(0.5 * static_cast<double>((n - 2) * m));
        const double Q = F / eps;
        const double lg2 = std::pow(std::log(1.0 / eps), 2.0);
        const double enc = Q * n * R;
        const double acc = Q * n * R * t * lg2;
        const double gates = acc * (n_x + tail(t / eps, 2.5));
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;

        const auto rel = [&](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        };
        worst = std::max(worst, rel(c.counts.at("initial_encoding"), enc));
        worst = std::max(worst, rel(c.counts.at("sparse_access_A"), acc));
        worst = std::max(worst, rel(c.counts.at("gates_evolution"), gates));
        worst = std::max(worst, rel(c.total, gates));
        worst = std::max(worst, rel(c.ancilla, n_x + tail(t / eps, 2.5)));
        worst = std::max(worst, rel(c.classical_baseline, std::exp2(2.0 * n_x)));
        worst = std::max(worst, rel(c.error_budget, (n >= 3 ? 4.0 : 3.0) * eps));
        if (n == 2) {
            worst = std::max(worst, rel(c.counts.at("gates_C2"), n_x * n_x / eps));
        } else {
            worst = std::max(worst, rel(c.counts.at("sparse_access_Ctilde"), Q));
            worst = std::max(
                worst, rel(c.counts.at("gates_Ctilde"), Q * (n * n_x + tail(fact / eps, 2.5))));
        }
    }
    bool pass = worst < 1e-12;

    // (b) monotonicity in every scaling parameter over a random grid.
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 3.0);
        const int n_x = 4 + static_cast<int>(rng.uniform01() * 10.0);
        const int m = 1 + static_cast<int>(rng.uniform01() * static_cast<double>(std::min(n_x, 8) - 1));
        const double t = 0.1 + 5.0 * rng.uniform01();
        const double R = 1.0 + 2.0 * rng.uniform01();
        const double eps = 0.3 * std::pow(10.0, -3.0 * rng.uniform01());
        const CostBudget base = cost_table(n, n_x, m, t, R, eps);
        const CostBudget bumped[] = {
            cost_table(n + 1, n_x, m, t, R, eps),
            cost_table(n, n_x + 1, m, t, R, eps),
            cost_table(n, n_x, m + (m < n_x ? 1 : 0), t, R, eps),
            cost_table(n, n_x, m, 2.0 * t, R, eps),
            cost_table(n, n_x, m, t, 1.5 * R, eps),
            cost_table(n, n_x, m, t, R, 0.5 * eps),
        };
        for (const CostBudget& b : bumped) {
            if (b.total < base.total * (1.0 - 1e-12) ||
                b.counts.at("initial_encoding") <
                    base.counts.at("initial_encoding") * (1.0 - 1e-12) ||
                b.counts.at("gates_evolution") <
                    base.counts.at("gates_evolution") * (1.0 - 1e-12))
                ++violations;
        }
    }
    pass = pass && violations == 0;

    // (c) crossover scan: affine quantum totals vs the exact 4^{n_x} wall.
    std::vector<int> range;
    for (int nx = 4; nx <= 20; ++nx) range.push_back(nx);
    const CrossoverTable cross = crossover_scan(3, 2, 2.0, 1.5, 0.01, range, false);
    double affine_defect = 0.0;
    const double d0 = cross.rows[1].quantum_total - cross.rows[0].quantum_total;
    bool wins_consistent = true, persistent = true, seen_win = false;
    int first_win = -1;
    for (std::size_t i = 0; i < cross.rows.size(); ++i) {
        const CrossoverRow& r = cross.rows[i];
        if (i + 1 < cross.rows.size())
            affine_defect = std::max(
                affine_defect,
                std::abs((cross.rows[i + 1].quantum_total - r.quantum_total) - d0) /
                    d0);
        if (r.classical != std::exp2(2.0 * r.n_x)) wins_consistent = false;
        if (r.quantum_wins != (r.quantum_total < r.classical)) wins_consistent = false;
        if (seen_win && !r.quantum_wins) persistent = false;
        if (r.quantum_wins && !seen_win) {
            seen_win = true;
            first_win = r.n_x;
        }
    }
    pass = pass && affine_defect < 1e-9 && wins_consistent && persistent && seen_win &&
           cross.first_advantage_n_x == first_win;

    // (d) the penalty for skipping coarse-graining entirely.
    double penalty_defect = 0.0;
    for (int n : {3, 4}) {
        const CrossoverTable flat = crossover_scan(n, 0, 2.0, 1.5, 0.01, range, false);
        const CrossoverTable tied = crossover_scan(n, 0, 2.0, 1.5, 0.01, range, true);
        for (std::size_t i = 0; i < range.size(); ++i) {
            const double want = std::exp2(0.5 * static_cast<double>((n - 2) * range[i]));
            const double got = tied.rows[i].quantum_total / flat.rows[i].quantum_total;
            penalty_defect = std::max(penalty_defect, std::abs(got / want - 1.0));
        }
    }
    pass = pass && penalty_defect < 1e-12;

    return {pass, fmt("formula defect=%.1e, %d monotonicity violations, affine "
                      "defect=%.1e, first advantage at n_x=%d, tie penalty "
                      "defect=%.1e",
                      worst, violations, affine_defect, first_win, penalty_defect)};
}

// ---- criterion 7: byte-identical reruns of every command ----

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Outcome cli_determinism() {
    const fs::path root = fs::temp_directory_path() / "qburgers_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    const nlohmann::json cfg = {
        {"grid", {{"n_x", 5}}},
        {"ic", {{"random", {{"sigma_xi", 0.3}, {"j_max", 2}, {"seed", 11}}}}},
        {"pipeline", {{"taus", {0.5}}, {"ns", {2, 3}}, {"m", 2}, {"rhos", {1}}}},
        {"readout", {{"mode", "gaussian"}, {"epsilon3", 1e-4}, {"seed", 7}}},
        {"ensemble", {{"n_en", 2}, {"base_seed", 5}}},
        {"output", {{"formats", {"csv", "json"}}}},
    };
    const fs::path cfg_path = root / "run.json";
    std::ofstream(cfg_path, std::ios::binary) << cfg.dump(2) << "\n";

    int compared = 0;
    for (const char* cmd : {"evolve", "correlate", "flatness", "resources", "ensemble"}) {
        for (const char* tag : {"a", "b"}) {
            const std::string out = (root / (std::string(cmd) + "_" + tag)).string();
            const std::string line = std::string(QBURGERS_BIN_PATH) + " " + cmd +
                                     " --config " + cfg_path.string() + " --out " + out +
                                     " >/dev/null 2>&1";
            const int rc = std::system(line.c_str());
            if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) != 0)
                return {false, fmt("%s exited with %d", cmd, WEXITSTATUS(rc))};
        }
        std::set<std::string> names_a, names_b;
        for (const auto& e : fs::directory_iterator(root / (std::string(cmd) + "_a")))
            names_a.insert(e.path().filename().string());
        for (const auto& e : fs::directory_iterator(root / (std::string(cmd) + "_b")))
            names_b.insert(e.path().filename().string());
        if (names_a != names_b || names_a.empty())
            return {false, fmt("%s wrote different file sets", cmd)};
        for (const auto& name : names_a) {
            if (slurp(root / (std::string(cmd) + "_a") / name) !=
                slurp(root / (std::string(cmd) + "_b") / name))
                return {false, fmt("%s: %s differs between reruns", cmd, name.c_str())};
            ++compared;
        }
    }
    return {true, fmt("5 commands rerun, %d files byte-identical", compared)};
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"flatness asymptote (seed-median)", flatness_asymptote},
        {"small-amplitude series truncation", series_truncation},
        {"pipeline vs brute-force ratios", pipeline_vs_brute_force},
        {"propagator and block encoding", propagator_suite},
        {"readout noise calibration", readout_calibration},
        {"cost-model structure", cost_model},
        {"command-line determinism", cli_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("unexpected exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(clock::now() - t0).count();
        std::printf("[%s] criterion %zu: %s (%.2f s)\n       %s\n",
                    o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                    o.detail.c_str());
        if (!o.pass) ++failures;
    }
    std::printf("%d/7 criteria passed\n", 7 - failures);
    return failures;
}
