#include "qburgers/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qburgers/errors.hpp"
#include "qburgers/numeric.hpp"
#include "qburgers/rng.hpp"

namespace qburgers {

namespace {

// Largest exponent magnitude fed to std::exp before we call it an
// overflow hazard; exp(+-700) is still finite in double precision.
constexpr double kMaxExponent = 700.0;

double max_abs(const std::vector<double>& v) {
    double a = 0.0;
    for (double x : v) a = std::max(a, std::abs(x));
    return a;
}

} // namespace

// sin(2 pi p / N) for p in [0, N) via a quarter-wave table.  The folding
// makes s(p + N/2) == -s(p) and s(N/2 - p) == s(p) hold bitwise, so sums
// over full periods cancel in exact pairs instead of accumulating the
// rounding of N independent std::sin calls.
std::vector<double> exact_sine_table(std::size_t N) {
    std::vector<double> quarter(N / 4 + 1);
    for (std::size_t p = 0; p <= N / 4; ++p)
        quarter[p] = std::sin(2.0 * std::numbers::pi * static_cast<double>(p) /
                              static_cast<double>(N));
    std::vector<double> s(N);
    for (std::size_t p = 0; p < N; ++p) {
        std::size_t q = p;
        double sign = 1.0;
        if (q >= N / 2) {
            sign = -1.0;
            q -= N / 2;
        }
        if (q > N / 4) q = N / 2 - q;
        s[p] = sign * quarter[q];
    }
    return s;
}

GridSpec GridSpec::make(int n_x, double L, BoundaryCondition bc) {
    if (n_x < 1 || n_x > 30)
        throw DomainError("GridSpec: n_x must lie in [1, 30], got " + std::to_string(n_x));
    if (!(L > 0.0) || !std::isfinite(L))
        throw DomainError("GridSpec: domain length must be positive and finite");
    GridSpec g;
    g.n_x = n_x;
    g.N_x = std::size_t{1} << n_x;
    g.L = L;
    g.dx = L / static_cast<double>(g.N_x);
    g.bc = bc;
    return g;
}

double PsiField::mean() const { return neumaier_mean(values); }

double PsiDerivField::raw_norm() const {
    double s = 0.0;
    for (double x : values) s += x * x;
    return std::sqrt(s);
}

PsiField make_plane_wave_ic(const GridSpec& g, const PlaneWaveIC& ic) {
    if (!(std::abs(ic.delta_m) < 1.0))
        throw DomainError("plane-wave IC: |delta_m| must be < 1 to keep psi positive");
    if (ic.m < 1 || static_cast<std::size_t>(ic.m) >= g.N_x / 2)
        throw DomainError("plane-wave IC: mode must satisfy 1 <= m < N_x/2");

    const std::vector<double> s = exact_sine_table(g.N_x);
    PsiField psi{g, std::vector<double>(g.N_x)};
    for (std::size_t j = 0; j < g.N_x; ++j) {
        // phase index (m * j) mod N_x; 64-bit keeps m*j exact
        const std::size_t p = (static_cast<std::size_t>(ic.m) * j) % g.N_x;
        psi.values[j] = 1.0 + ic.delta_m * s[p];
    }
    return psi;
}

PsiField make_random_ic(const GridSpec& g, const RandomIC& ic) {
    if (!(ic.sigma_xi >= 0.0) || !std::isfinite(ic.sigma_xi))
        throw DomainError("random IC: sigma_xi must be >= 0");
    if (ic.j_max < 1 || static_cast<std::size_t>(ic.j_max) >= g.N_x / 2)
        throw DomainError("random IC: j_max must satisfy 1 <= j_max < N_x/2");

    Rng rng(ic.seed);
    std::vector<double> xi(2 * static_cast<std::size_t>(ic.j_max) + 1);
    for (double& x : xi) x = ic.sigma_xi * rng.normal();

    PsiField psi{g, std::vector<double>(g.N_x)};
    const double w = 2.0 * std::numbers::pi / static_cast<double>(g.N_x);
    for (std::size_t j = 0; j < g.N_x; ++j) {
        double e = xi[0];
        for (int k = 1; k <= ic.j_max; ++k) {
            const double a = w * static_cast<double>(k) * static_cast<double>(j);
            e += xi[static_cast<std::size_t>(k)] * std::cos(a);
            e += xi[static_cast<std::size_t>(ic.j_max + k)] * std::sin(a);
        }
        if (std::abs(e) > kMaxExponent)
            throw NumericGuardError("random IC: exponent overflow at site " + std::to_string(j));
        psi.values[j] = std::exp(e);
    }
    return psi;
}

PsiField cole_hopf_forward(const VelocityField& u, const PhysicsParams& p) {
    if (!(p.nu > 0.0)) throw DomainError("cole_hopf_forward: nu must be positive");
    if (u.grid.bc != BoundaryCondition::Periodic)
        throw DomainError("cole_hopf_forward: periodic grid required");
    require_finite(u.values, "cole_hopf_forward: u");

    const GridSpec& g = u.grid;
    PsiField psi{g, std::vector<double>(g.N_x)};
    double integral = 0.0;
    psi.values[0] = 1.0;
    for (std::size_t j = 1; j < g.N_x; ++j) {
        integral += 0.5 * g.dx * (u.values[j - 1] + u.values[j]);
        const double e = -integral / (2.0 * p.nu);
        if (std::abs(e) > kMaxExponent)
            throw NumericGuardError("cole_hopf_forward: exponent overflow at site " +
                                    std::to_string(j));
        psi.values[j] = std::exp(e);
    }
    return psi;
}

PsiDerivField derivative(const PsiField& psi) {
    require_finite(psi.values, "derivative: psi");
    const GridSpec& g = psi.grid;
    PsiDerivField d{g, std::vector<double>(g.N_x)};
    const double inv2dx = 1.0 / (2.0 * g.dx);
    for (std::size_t j = 0; j < g.N_x; ++j) {
        const std::size_t jp = (j + 1) % g.N_x;
        const std::size_t jm = (j + g.N_x - 1) % g.N_x;
        d.values[j] = (psi.values[jp] - psi.values[jm]) * inv2dx;
    }
    return d;
}

VelocityField cole_hopf_inverse_exact(const PsiField& psi, const PhysicsParams& p) {
    if (!(p.nu > 0.0)) throw DomainError("cole_hopf_inverse_exact: nu must be positive");
    require_finite(psi.values, "cole_hopf_inverse_exact: psi");

    const double floor = 1e-12 * max_abs(psi.values);
    const PsiDerivField d = derivative(psi);
    VelocityField u{psi.grid, std::vector<double>(psi.grid.N_x)};
    for (std::size_t j = 0; j < psi.grid.N_x; ++j) {
        if (!(std::abs(psi.values[j]) > floor))
            throw NumericGuardError(
                "cole_hopf_inverse_exact: division hazard, |psi| ~ 0 at site " +
                std::to_string(j));
        u.values[j] = -2.0 * p.nu * d.values[j] / psi.values[j];
    }
    return u;
}

VelocityField cole_hopf_inverse_approx(const PsiDerivField& dpsi, double psi_bar,
                                       const PhysicsParams& p, ApproxPrefactor pref) {
    if (!(p.nu > 0.0)) throw DomainError("cole_hopf_inverse_approx: nu must be positive");
    require_finite(dpsi.values, "cole_hopf_inverse_approx: dpsi");
    if (!std::isfinite(psi_bar) || std::abs(psi_bar) < 1e-300)
        throw NumericGuardError("cole_hopf_inverse_approx: invalid baseline, mean(psi) ~ 0");

    const double c = (pref == ApproxPrefactor::TwoNu ? 2.0 : 1.0) * p.nu / psi_bar;
    VelocityField u{dpsi.grid, std::vector<double>(dpsi.grid.N_x)};
    for (std::size_t j = 0; j < dpsi.grid.N_x; ++j) u.values[j] = -c * dpsi.values[j];
    return u;
}

double reynolds_diagnostic(const VelocityField& u, const PhysicsParams& p, double l) {
    if (!(p.nu > 0.0)) throw DomainError("reynolds_diagnostic: nu must be positive");
    if (!(l > 0.0)) throw DomainError("reynolds_diagnostic: stirring scale l must be positive");
    require_finite(u.values, "reynolds_diagnostic: u");
    double ss = 0.0;
    for (double v : u.values) ss += v * v;
    const double u_rms = std::sqrt(ss / static_cast<double>(u.values.size()));
    return u_rms * l / p.nu;
}

} // namespace qburgers
