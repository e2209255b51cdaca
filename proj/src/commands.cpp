#include "qburgers/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qburgers/errors.hpp"
#include "qburgers/heat.hpp"
#include "qburgers/io.hpp"
#include "qburgers/reference.hpp"
#include "qburgers/resources.hpp"
#include "qburgers/rng.hpp"

namespace qburgers {

namespace {

namespace fs = std::filesystem;

/// Opens `name` inside the output directory, creating the directory on
/// demand.  Binary mode keeps line endings at '\n' everywhere, which the
/// byte-identical rerun guarantee relies on.
std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    fs::create_directories(cfg.output.directory, ec);
    const fs::path p = fs::path(cfg.output.directory) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("cannot write output file: " + p.string());
    std::cout << "wrote " << name << '\n';
    return os;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), fmt) !=
           cfg.output.formats.end();
}

void write_json_file(const RunConfig& cfg, const std::string& name,
                     const nlohmann::json& j) {
    auto os = open_output(cfg, name);
    os << j.dump(2) << '\n';
}

/// One velocity value per line; blank lines and '#' comments allowed.
VelocityField read_velocity_file(const GridSpec& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open velocity file: " + path);
    VelocityField u{g, {}};
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream is(line);
        double v = 0.0;
        while (is >> v) u.values.push_back(v);
    }
    if (u.values.size() != g.N_x)
        throw ConfigError("velocity file " + path + " holds " +
                          std::to_string(u.values.size()) + " values, expected " +
                          std::to_string(g.N_x));
    return u;
}

PsiField initial_psi(const RunConfig& cfg) {
    switch (cfg.ic.kind) {
        case IcKind::Random: return make_random_ic(cfg.grid, cfg.ic.random);
        case IcKind::PlaneWave: return make_plane_wave_ic(cfg.grid, cfg.ic.plane_wave);
        case IcKind::File:
            return cole_hopf_forward(read_velocity_file(cfg.grid, cfg.ic.file_path),
                                     cfg.physics);
    }
    throw ConfigError("unreachable initial-condition kind");
}

void require_increasing_taus(const RunConfig& cfg) {
    for (std::size_t i = 1; i < cfg.pipeline.taus.size(); ++i)
        if (!(cfg.pipeline.taus[i] > cfg.pipeline.taus[i - 1]))
            throw ConfigError("pipeline.taus must be strictly increasing for this command");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Flatness of both inversions along a tau list (domain units), starting
/// from an arbitrary Cole-Hopf field.
FlatnessSeries series_from_psi(const PsiField& psi0, const PhysicsParams& p,
                               const std::vector<double>& taus_domain) {
    const double n2 = static_cast<double>(psi0.grid.N_x) *
                      static_cast<double>(psi0.grid.N_x);
    FlatnessSeries s;
    s.taus = taus_domain;
    for (double tau : taus_domain) {
        const PsiField psi_t = propagate(psi0, tau * n2);
        s.beta_exact.push_back(flatness(cole_hopf_inverse_exact(psi_t, p)));
        const PsiDerivField dpsi = derivative(psi_t);
        s.beta_approx.push_back(
            flatness(cole_hopf_inverse_approx(dpsi, psi_t.mean(), p)));
    }
    return s;
}

/// The coarse-grained velocity statevector at one evolution time; the
/// input `s0` is the tau = 0 amplitude encoding of d_x psi.
AmplitudeState coarse_velocity_state(const AmplitudeState& s0, double tau_grid, int m) {
    return coarse_grain(negate_to_velocity(apply_propagator(s0, tau_grid)), m);
}

nlohmann::json seeds_json(const RunConfig& cfg) {
    nlohmann::json s;
    if (cfg.ic.kind == IcKind::Random) s["ic_random"] = cfg.ic.random.seed;
    s["readout"] = cfg.readout.seed;
    s["ensemble_base"] = cfg.ensemble.base_seed;
    return s;
}

const char* tau_unit_name(const RunConfig& cfg) {
    return cfg.pipeline.tau_unit == TauUnit::Grid ? "grid" : "domain";
}

} // namespace

void cmd_evolve(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    const PsiField psi0 = initial_psi(cfg);
    const std::vector<double> taus_g = cfg.taus_grid();

    std::vector<PsiField> snapshots;
    snapshots.reserve(taus_g.size());
    for (double t : taus_g) snapshots.push_back(propagate(psi0, t));

    if (wants(cfg, "csv")) {
        auto os = open_output(cfg, "evolve.csv");
        os << "# config_hash=" << hash << '\n';
        os << "tau,x,psi\n";
        for (std::size_t k = 0; k < snapshots.size(); ++k)
            for (std::size_t j = 0; j < cfg.grid.N_x; ++j)
                os << csv_join({format_g17(cfg.pipeline.taus[k]),
                                format_g17(static_cast<double>(j) * cfg.grid.dx),
                                format_g17(snapshots[k].values[j])})
                   << '\n';
    }
    if (wants(cfg, "json")) {
        nlohmann::json snaps = nlohmann::json::array();
        for (std::size_t k = 0; k < snapshots.size(); ++k) {
            nlohmann::json x = nlohmann::json::array();
            for (std::size_t j = 0; j < cfg.grid.N_x; ++j)
                x.push_back(static_cast<double>(j) * cfg.grid.dx);
            snaps.push_back({{"tau", cfg.pipeline.taus[k]},
                             {"x", x},
                             {"psi", snapshots[k].values}});
        }
        write_json_file(cfg, "evolve.json",
                        {{"config_hash", hash},
                         {"tau_unit", tau_unit_name(cfg)},
                         {"snapshots", snaps}});
    }
}

void cmd_correlate(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    const int m_eff = cfg.effective_m();
    const PsiField psi0 = initial_psi(cfg);
    const AmplitudeState s0 = amplitude_encode(derivative(psi0), cfg.max_qubits);
    const std::vector<double> taus_g = cfg.taus_grid();

    Rng noise_root(cfg.readout.seed);
    std::uint64_t row_counter = 0;
    std::vector<std::string> files;
    nlohmann::json json_blocks = nlohmann::json::array();

    for (std::size_t k = 0; k < taus_g.size(); ++k) {
        const AmplitudeState cg = coarse_velocity_state(s0, taus_g[k], m_eff);
        CorrelationResult per_tau;
        for (int n : cfg.pipeline.ns) {
            const AmplitudeState U = build_U_n(cg, n, cfg.max_qubits);
            for (const auto& rho_vec : cfg.sweep_for_order(n)) {
                const ReadoutNoise noise =
                    cfg.readout.with_seed(noise_root.split(row_counter++).seed());
                const CorrelationResult one =
                    ratio_Pn_over_In(U, n, m_eff, rho_vec, noise);
                per_tau.rows.insert(per_tau.rows.end(), one.rows.begin(),
                                    one.rows.end());
            }
        }
        if (wants(cfg, "csv")) {
            const std::string name = "correlations_tau" + std::to_string(k) + ".csv";
            auto os = open_output(cfg, name);
            os << "# config_hash=" << hash << '\n';
            os << "# tau=" << format_g17(cfg.pipeline.taus[k]) << '\n';
            per_tau.write_csv(os);
            files.push_back(name);
        }
        if (wants(cfg, "json"))
            json_blocks.push_back({{"tau", cfg.pipeline.taus[k]},
                                   {"tau_grid", taus_g[k]},
                                   {"rows", per_tau.to_json()}});
    }

    if (wants(cfg, "json"))
        write_json_file(cfg, "correlations.json",
                        {{"config_hash", hash},
                         {"tau_unit", tau_unit_name(cfg)},
                         {"blocks", json_blocks}});
    write_json_file(cfg, "provenance.json",
                    {{"command", "correlate"},
                     {"config_hash", hash},
                     {"config", effective_json(cfg)},
                     {"seeds", seeds_json(cfg)},
                     {"error_model",
                      {{"eps1", 0.0}, {"eps2", 0.0}, {"eps3", cfg.readout.epsilon3}}},
                     {"files", files}});
}

void cmd_flatness(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    require_increasing_taus(cfg);
    const std::vector<double> taus_d = cfg.taus_domain();

    std::vector<FlatnessSeries> series;
    std::string seed_policy = "single-seed";
    if (cfg.ic.kind == IcKind::Random) {
        std::vector<std::uint64_t> seeds;
        if (cfg.pipeline.n_seeds == 1) {
            seeds.push_back(cfg.ic.random.seed);
        } else {
            seed_policy = "seed-median";
            Rng root(cfg.ic.random.seed);
            for (int i = 1; i <= cfg.pipeline.n_seeds; ++i)
                seeds.push_back(root.split(static_cast<std::uint64_t>(i)).seed());
        }
        for (std::uint64_t s : seeds) {
            RandomIC ic = cfg.ic.random;
            ic.seed = s;
            series.push_back(run_figure2(cfg.grid, ic, cfg.physics, taus_d));
        }
    } else {
        series.push_back(series_from_psi(initial_psi(cfg), cfg.physics, taus_d));
    }

    FlatnessSeries out;
    out.taus = cfg.pipeline.taus;  // echo the configured unit
    for (std::size_t k = 0; k < taus_d.size(); ++k) {
        std::vector<double> be, ba;
        for (const auto& s : series) {
            be.push_back(s.beta_exact[k]);
            ba.push_back(s.beta_approx[k]);
        }
        out.beta_exact.push_back(median(be));
        out.beta_approx.push_back(median(ba));
    }

    if (wants(cfg, "csv")) {
        auto os = open_output(cfg, "flatness.csv");
        os << "# config_hash=" << hash << '\n';
        out.write_csv(os);
    }
    if (wants(cfg, "json"))
        write_json_file(cfg, "flatness.json",
                        {{"config_hash", hash},
                         {"tau_unit", tau_unit_name(cfg)},
                         {"taus", out.taus},
                         {"beta_exact", out.beta_exact},
                         {"beta_approx", out.beta_approx}});

    const double be_f = out.beta_exact.back();
    const double ba_f = out.beta_approx.back();
    write_json_file(cfg, "summary.json",
                    {{"command", "flatness"},
                     {"config_hash", hash},
                     {"n_seeds", cfg.pipeline.n_seeds},
                     {"seed_policy", seed_policy},
                     {"tau_final", cfg.pipeline.taus.back()},
                     {"beta_exact_final", be_f},
                     {"beta_approx_final", ba_f},
                     {"beta_gap_final", std::abs(be_f - ba_f)},
                     {"asymptote", -1.5},
                     {"distance_exact_to_asymptote", std::abs(be_f - (-1.5))},
                     {"distance_approx_to_asymptote", std::abs(ba_f - (-1.5))}});
}

void cmd_resources(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    const int m_eff = cfg.effective_m();
    const std::vector<double> taus_g = cfg.taus_grid();
    const double tau_g = *std::max_element(taus_g.begin(), taus_g.end());

    // Norm amplification of the configured initial data over the longest
    // evolution: the success-probability overhead every query row carries.
    const PsiDerivField dpsi = derivative(initial_psi(cfg));
    const double R = norm_ratio(dpsi, tau_g);
    const double eps =
        (cfg.readout.epsilon3 > 0.0 && cfg.readout.epsilon3 < 1.0)
            ? cfg.readout.epsilon3
            : 0.01;  // cost tables need a nonzero target even in exact mode

    std::vector<CostBudget> rows;
    for (int n : cfg.pipeline.ns) rows.push_back(cost_table(n, cfg.grid.n_x, m_eff, tau_g, R, eps));

    const int scan_lo = std::max(1, m_eff);
    std::vector<int> scan;
    for (int nx = scan_lo; nx <= std::max(24, scan_lo); ++nx) scan.push_back(nx);
    const CrossoverTable cross =
        crossover_scan(cfg.pipeline.ns.front(), m_eff, tau_g, R, eps, scan, false);

    if (wants(cfg, "csv")) {
        auto os = open_output(cfg, "cost_table.csv");
        os << "# config_hash=" << hash << '\n';
        write_cost_csv(os, rows);
        auto os2 = open_output(cfg, "crossover.csv");
        os2 << "# config_hash=" << hash << '\n';
        write_crossover_csv(os2, cross);
    }
    if (wants(cfg, "json"))
        write_json_file(cfg, "resources.json",
                        {{"config_hash", hash},
                         {"tau_grid", tau_g},
                         {"norm_ratio", R},
                         {"eps", eps},
                         {"cost", cost_to_json(rows)},
                         {"crossover", crossover_to_json(cross)}});
}

void cmd_ensemble(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    const int m_eff = cfg.effective_m();
    const int n_en = cfg.ensemble.n_en;
    const std::vector<double> taus_g = cfg.taus_grid();

    // Per-member initial encodings; for a random ic each member gets its
    // own substream of the ensemble base seed.
    Rng member_root(cfg.ensemble.base_seed);
    std::vector<std::uint64_t> member_seeds;
    std::vector<AmplitudeState> encoded;
    for (int a = 0; a < n_en; ++a) {
        RunConfig member_cfg = cfg;
        if (cfg.ic.kind == IcKind::Random) {
            member_cfg.ic.random.seed =
                member_root.split(static_cast<std::uint64_t>(a)).seed();
            member_seeds.push_back(member_cfg.ic.random.seed);
        }
        encoded.push_back(
            amplitude_encode(derivative(initial_psi(member_cfg)), cfg.max_qubits));
    }

    const ReadoutNoise exact_noise;  // reference column is read without noise
    Rng noise_root(cfg.readout.seed);
    std::uint64_t row_counter = 0;

    CorrelationResult quantum_rows;
    nlohmann::json checks = nlohmann::json::array();
    std::vector<std::string> check_lines;

    for (std::size_t k = 0; k < taus_g.size(); ++k) {
        std::vector<AmplitudeState> coarse;
        for (const auto& s0 : encoded)
            coarse.push_back(coarse_velocity_state(s0, taus_g[k], m_eff));
        for (int n : cfg.pipeline.ns) {
            std::vector<AmplitudeState> members;
            for (const auto& c : coarse) members.push_back(build_U_n(c, n, cfg.max_qubits));
            const AmplitudeState s_en = ensemble_superpose(members, cfg.max_qubits);
            for (const auto& rho_vec : cfg.sweep_for_order(n)) {
                const ReadoutNoise noise =
                    cfg.readout.with_seed(noise_root.split(row_counter++).seed());
                const CorrelationResult q =
                    ensemble_ratio(s_en, n, m_eff, rho_vec, noise);
                quantum_rows.rows.insert(quantum_rows.rows.end(), q.rows.begin(),
                                         q.rows.end());

                // Reference: mean of per-member exact expectations, the
                // classical way of averaging the same ensemble.
                double num = 0.0, den = 0.0;
                for (const auto& u : members) {
                    const CorrelationResult r =
                        ratio_Pn_over_In(u, n, m_eff, rho_vec, exact_noise);
                    num += r.rows.front().numerator;
                    den += r.rows.front().denominator;
                }
                const double member_mean = num / den;
                const double quantum = q.rows.front().ratio;

                std::string rho_label;
                for (std::size_t i = 0; i < rho_vec.size(); ++i)
                    rho_label += (i ? ";" : "") + std::to_string(rho_vec[i]);
                check_lines.push_back(csv_join(
                    {std::to_string(n), format_g17(cfg.pipeline.taus[k]), rho_label,
                     format_g17(quantum), format_g17(member_mean),
                     format_g17(std::abs(quantum - member_mean))}));
                checks.push_back({{"n", n},
                                  {"tau", cfg.pipeline.taus[k]},
                                  {"rho_vec", rho_vec},
                                  {"quantum_ratio", quantum},
                                  {"member_mean_ratio", member_mean}});
            }
        }
    }

    if (wants(cfg, "csv")) {
        auto os = open_output(cfg, "ensemble.csv");
        os << "# config_hash=" << hash << '\n';
        quantum_rows.write_csv(os);
        auto os2 = open_output(cfg, "ensemble_check.csv");
        os2 << "# config_hash=" << hash << '\n';
        os2 << "n,tau,rho_vec,quantum_ratio,member_mean_ratio,abs_diff\n";
        for (const auto& line : check_lines) os2 << line << '\n';
    }
    if (wants(cfg, "json"))
        write_json_file(cfg, "ensemble.json",
                        {{"config_hash", hash},
                         {"tau_unit", tau_unit_name(cfg)},
                         {"rows", quantum_rows.to_json()},
                         {"checks", checks}});
    write_json_file(cfg, "provenance.json",
                    {{"command", "ensemble"},
                     {"config_hash", hash},
                     {"config", effective_json(cfg)},
                     {"seeds", seeds_json(cfg)},
                     {"member_seeds", member_seeds},
                     {"n_en", n_en}});
}

} // namespace qburgers
