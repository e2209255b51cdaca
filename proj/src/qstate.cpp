#include "qburgers/qstate.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qburgers/errors.hpp"
#include "qburgers/heat.hpp"
#include "qburgers/numeric.hpp"

static_assert(std::endian::native == std::endian::little,
              "state dump format assumes a little-endian host");

namespace qburgers {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_plain_register(const AmplitudeState& s, const char* op) {
    const RegisterLayout& l = s.layout;
    if (l.copies != 1 || l.flag || l.n_en != 0 || l.m != 0)
        throw DomainError(std::string(op) + ": plain single-register state required");
}

double vec_norm(const std::vector<std::complex<double>>& v) {
    double ss = 0.0;
    for (const auto& a : v) ss += std::norm(a);
    return std::sqrt(ss);
}

std::vector<std::complex<double>> kron(const std::vector<std::complex<double>>& a,
                                       const std::vector<std::complex<double>>& b) {
    std::vector<std::complex<double>> out(a.size() * b.size());
    std::size_t idx = 0;
    for (const auto& x : a)
        for (const auto& y : b) out[idx++] = x * y;
    return out;
}

} // namespace

void check_qubit_budget(int needed, int ceiling, const std::string& what) {
    if (needed > ceiling)
        throw ResourceCeilingError(what + " requires " + std::to_string(needed) +
                                   " qubits, ceiling is " + std::to_string(ceiling));
}

double AmplitudeState::norm() const { return vec_norm(amps); }

AmplitudeState amplitude_encode(const PsiDerivField& dpsi, int max_qubits) {
    require_finite(dpsi.values, "amplitude_encode: dpsi");
    check_qubit_budget(dpsi.grid.n_x, max_qubits, "amplitude_encode");
    const double n = dpsi.raw_norm();
    if (!(n > 0.0))
        throw NumericGuardError("amplitude_encode: encoding error, zero field");

    AmplitudeState s;
    s.grid = dpsi.grid;
    s.layout = RegisterLayout{dpsi.grid.n_x, 0, 1, false, 0};
    s.amps.resize(dpsi.grid.N_x);
    for (std::size_t j = 0; j < dpsi.grid.N_x; ++j) s.amps[j] = dpsi.values[j] / n;
    s.scale = n;
    return s;
}

AmplitudeState apply_propagator(const AmplitudeState& s, double tau) {
    require_plain_register(s, "apply_propagator");
    std::vector<std::complex<double>> evolved = heat_evolve(s.amps, s.grid, tau);
    const double n = vec_norm(evolved);
    if (n < 1e-30)
        throw NumericGuardError("apply_propagator: overflow guard, state fully decayed");
    AmplitudeState out = s;
    for (auto& a : evolved) a /= n;
    out.amps = std::move(evolved);
    out.scale = s.scale * n;
    return out;
}

AmplitudeState negate_to_velocity(const AmplitudeState& s) {
    require_plain_register(s, "negate_to_velocity");
    AmplitudeState out = s;
    for (auto& a : out.amps) a = -a;
    return out;
}

AmplitudeState coarse_grain(const AmplitudeState& s, int m) {
    require_plain_register(s, "coarse_grain");
    if (m < 1 || m > s.layout.n_x)
        throw DomainError("coarse_grain: m must lie in [1, n_x]");

    AmplitudeState out = s;
    const std::size_t block = std::size_t{1} << (s.layout.n_x - m);
    // In-place Walsh-Hadamard transform of each coarse block, one
    // normalized butterfly stage per sub-grid qubit; offset 0 of each
    // block ends up holding the normalized block sum.
    for (std::size_t base = 0; base < out.amps.size(); base += block) {
        for (std::size_t len = 1; len < block; len <<= 1) {
            for (std::size_t i = 0; i < block; i += 2 * len) {
                for (std::size_t k = 0; k < len; ++k) {
                    const auto a = out.amps[base + i + k];
                    const auto b = out.amps[base + i + k + len];
                    out.amps[base + i + k] = (a + b) * kInvSqrt2;
                    out.amps[base + i + k + len] = (a - b) * kInvSqrt2;
                }
            }
        }
    }
    out.layout.m = m;
    return out;
}

AmplitudeState cyclic_shift(const AmplitudeState& s, long long rho) {
    require_plain_register(s, "cyclic_shift");
    const auto N = static_cast<long long>(s.grid.N_x);
    const std::size_t r = static_cast<std::size_t>(((rho % N) + N) % N);
    AmplitudeState out = s;
    for (std::size_t j = 0; j < s.amps.size(); ++j)
        out.amps[(j + r) % s.amps.size()] = s.amps[j];
    return out;
}

AmplitudeState build_U_n(const AmplitudeState& s_cg, int n, int max_qubits) {
    if (n < 2) throw DomainError("build_U_n: n must be >= 2");
    const RegisterLayout& l = s_cg.layout;
    if (l.copies != 1 || l.flag || l.n_en != 0 || l.m < 1)
        throw DomainError("build_U_n: coarse-grained single-copy state required");

    AmplitudeState out = s_cg;
    if (n % 2 == 0) {
        const int copies = n / 2;
        check_qubit_budget(copies * l.n_x, max_qubits, "build_U_n");
        std::vector<std::complex<double>> amps = s_cg.amps;
        for (int c = 1; c < copies; ++c) amps = kron(amps, s_cg.amps);
        out.amps = std::move(amps);
        out.layout.copies = copies;
        return out;
    }

    // Odd n = 2k+1: flag 0 carries k+1 field copies, flag 1 carries k
    // copies with the last register parked in |0...0>; both branches get
    // weight 1/sqrt(2).
    const int k = (n - 1) / 2;
    check_qubit_budget((k + 1) * l.n_x + 1, max_qubits, "build_U_n");
    std::vector<std::complex<double>> reg_k = s_cg.amps;
    for (int c = 1; c < k; ++c) reg_k = kron(reg_k, s_cg.amps);
    const std::vector<std::complex<double>> reg_k1 = kron(reg_k, s_cg.amps);

    const std::size_t reg_dim = reg_k1.size();
    const std::size_t unit = s_cg.amps.size();
    std::vector<std::complex<double>> amps(2 * reg_dim, 0.0);
    for (std::size_t j = 0; j < reg_dim; ++j) amps[2 * j] = reg_k1[j] * kInvSqrt2;
    // flag-1 branch: registers (j, 0...0) -> index (j * unit) * 2 + 1
    for (std::size_t j = 0; j < reg_k.size(); ++j)
        amps[2 * (j * unit) + 1] = reg_k[j] * kInvSqrt2;

    out.amps = std::move(amps);
    out.layout.copies = k + 1;
    out.layout.flag = true;
    return out;
}

AmplitudeState ensemble_superpose(const std::vector<AmplitudeState>& states, int max_qubits) {
    if (states.empty() || (states.size() & (states.size() - 1)) != 0)
        throw DomainError("ensemble_superpose: member count must be a nonzero power of two");
    const std::size_t N_en = states.size();
    const int n_en = std::bit_width(N_en) - 1;

    for (const auto& s : states) {
        if (s.layout != states.front().layout || s.grid.N_x != states.front().grid.N_x ||
            s.grid.bc != states.front().grid.bc)
            throw DomainError("ensemble_superpose: layout mismatch between members");
        if (s.layout.n_en != 0)
            throw DomainError("ensemble_superpose: members must not already carry a label");
    }

    AmplitudeState out = states.front();
    check_qubit_budget(out.layout.total_qubits() + n_en, max_qubits, "ensemble_superpose");
    const double w = 1.0 / std::sqrt(static_cast<double>(N_en));
    out.amps.assign(states.front().amps.size() * N_en, 0.0);
    out.member_scales.clear();
    for (std::size_t alpha = 0; alpha < N_en; ++alpha) {
        const auto& member = states[alpha].amps;
        for (std::size_t j = 0; j < member.size(); ++j)
            out.amps[j * N_en + alpha] = member[j] * w;
        out.member_scales.push_back(states[alpha].scale);
    }
    out.layout.n_en = n_en;
    out.scale = 1.0;  // composite norm is 1 by construction; see member_scales
    return out;
}

void dump_state(const AmplitudeState& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("dump_state: cannot open " + path);
    const std::uint64_t count = s.amps.size();
    f.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const auto& a : s.amps) {
        const double re = a.real(), im = a.imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof(re));
        f.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
    if (!f) throw ConfigError("dump_state: write failed for " + path);

    nlohmann::json side{
        {"n_qubits", s.n_qubits()},
        {"scale", s.scale},
        {"member_scales", s.member_scales},
        {"layout",
         {{"n_x", s.layout.n_x},
          {"m", s.layout.m},
          {"copies", s.layout.copies},
          {"flag", s.layout.flag},
          {"n_en", s.layout.n_en}}},
        {"grid",
         {{"n_x", s.grid.n_x},
          {"L", s.grid.L},
          {"bc", s.grid.bc == BoundaryCondition::Periodic ? "periodic" : "dirichlet"}}}};
    std::ofstream js(path + ".json");
    if (!js) throw ConfigError("dump_state: cannot open " + path + ".json");
    js << side.dump(2) << '\n';
}

AmplitudeState load_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("load_state: cannot open " + path);
    std::uint64_t count = 0;
    f.read(reinterpret_cast<char*>(&count), sizeof(count));
    AmplitudeState s;
    s.amps.resize(count);
    for (auto& a : s.amps) {
        double re = 0.0, im = 0.0;
        f.read(reinterpret_cast<char*>(&re), sizeof(re));
        f.read(reinterpret_cast<char*>(&im), sizeof(im));
        a = {re, im};
    }
    if (!f) throw ConfigError("load_state: truncated amplitude block in " + path);

    std::ifstream js(path + ".json");
    if (!js) throw ConfigError("load_state: missing sidecar " + path + ".json");
    nlohmann::json side = nlohmann::json::parse(js);
    s.scale = side.at("scale").get<double>();
    s.member_scales = side.at("member_scales").get<std::vector<double>>();
    const auto& l = side.at("layout");
    s.layout = RegisterLayout{l.at("n_x").get<int>(), l.at("m").get<int>(),
                              l.at("copies").get<int>(), l.at("flag").get<bool>(),
                              l.at("n_en").get<int>()};
    const auto& g = side.at("grid");
    s.grid = GridSpec::make(g.at("n_x").get<int>(), g.at("L").get<double>(),
                            g.at("bc").get<std::string>() == "dirichlet"
                                ? BoundaryCondition::Dirichlet
                                : BoundaryCondition::Periodic);
    if ((std::uint64_t{1} << s.n_qubits()) != count)
        throw ConfigError("load_state: amplitude count disagrees with layout in " + path);
    return s;
}

} // namespace qburgers
