#include "qburgers/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "qburgers/errors.hpp"
#include "qburgers/heat.hpp"
#include "qburgers/io.hpp"
#include "qburgers/numeric.hpp"

namespace qburgers {

double brute_force_Pn(const VelocityField& u, const std::vector<long long>& r_offsets) {
    require_finite(u.values, "brute_force_Pn: u");
    const auto N = static_cast<long long>(u.grid.N_x);

    std::vector<std::size_t> off;
    off.reserve(r_offsets.size());
    for (long long r : r_offsets) off.push_back(static_cast<std::size_t>(((r % N) + N) % N));

    std::vector<double> terms(u.grid.N_x);
    for (std::size_t k = 0; k < u.grid.N_x; ++k) {
        double prod = u.values[k];
        for (std::size_t r : off) prod *= u.values[(k + r) % u.grid.N_x];
        terms[k] = prod;
    }
    return neumaier_sum(terms) / static_cast<double>(u.grid.N_x);
}

double flatness(const VelocityField& u) {
    const double I2 = brute_force_Pn(u, {0});
    if (!(I2 > 0.0))
        throw NumericGuardError("flatness: undefined, coincident second moment is zero");
    const double I4 = brute_force_Pn(u, {0, 0, 0});
    return I4 / (I2 * I2) - 3.0;
}

void FlatnessSeries::write_csv(std::ostream& os) const {
    os << "tau,beta_exact,beta_approx\n";
    for (std::size_t i = 0; i < taus.size(); ++i)
        os << csv_join({format_g17(taus[i]), format_g17(beta_exact[i]),
                        format_g17(beta_approx[i])})
           << '\n';
}

FlatnessSeries run_figure2(const GridSpec& g, const RandomIC& ic, const PhysicsParams& p,
                           const std::vector<double>& taus) {
    if (taus.empty()) throw DomainError("run_figure2: tau list must be non-empty");
    for (std::size_t i = 0; i + 1 < taus.size(); ++i)
        if (!(taus[i] < taus[i + 1]))
            throw DomainError("run_figure2: tau list must be strictly increasing");
    if (!(taus.front() >= 0.0)) throw DomainError("run_figure2: taus must be >= 0");

    const PsiField psi_init = make_random_ic(g, ic);
    const double N2 = static_cast<double>(g.N_x) * static_cast<double>(g.N_x);

    FlatnessSeries fs;
    for (double tau : taus) {
        const PsiField psi = propagate(psi_init, tau * N2);
        const VelocityField u_exact = cole_hopf_inverse_exact(psi, p);
        const VelocityField u_approx =
            cole_hopf_inverse_approx(derivative(psi), psi.mean(), p);
        const double be = flatness(u_exact);
        const double ba = flatness(u_approx);
        // Fourth moments are non-negative, so beta >= -3 identically.
        if (be < -3.0 - 1e-9 || ba < -3.0 - 1e-9)
            throw NumericGuardError("run_figure2: flatness below the -3 floor");
        fs.taus.push_back(tau);
        fs.beta_exact.push_back(be);
        fs.beta_approx.push_back(ba);
    }
    return fs;
}

PsiField analytic_psi_plane_wave(const PlaneWaveIC& ic, const GridSpec& g,
                                 const PhysicsParams& p, double tau) {
    (void)p;  // the normalized decay depends only on tau and the mode
    if (!(std::abs(ic.delta_m) < 1.0))
        throw DomainError("analytic_psi_plane_wave: |delta_m| must be < 1");
    if (ic.m < 1 || static_cast<std::size_t>(ic.m) >= g.N_x / 2)
        throw DomainError("analytic_psi_plane_wave: mode must satisfy 1 <= m < N_x/2");
    if (tau < 0.0) throw DomainError("analytic_psi_plane_wave: tau must be >= 0");

    const double pi = std::numbers::pi;
    const double mm = static_cast<double>(ic.m);
    const double N2 = static_cast<double>(g.N_x) * static_cast<double>(g.N_x);
    const double decay = std::exp(-4.0 * pi * pi * mm * mm * tau / N2);

    const std::vector<double> s = exact_sine_table(g.N_x);
    PsiField psi{g, std::vector<double>(g.N_x)};
    for (std::size_t j = 0; j < g.N_x; ++j) {
        const std::size_t ph = (static_cast<std::size_t>(ic.m) * j) % g.N_x;
        psi.values[j] = 1.0 + ic.delta_m * (decay * s[ph]);
    }
    return psi;
}

double analytic_beta_plane_wave(const PlaneWaveIC& ic, const GridSpec& g, double tau) {
    const double pi = std::numbers::pi;
    const double mm = static_cast<double>(ic.m);
    const double N2 = static_cast<double>(g.N_x) * static_cast<double>(g.N_x);
    const double e2 = std::exp(-8.0 * pi * pi * mm * mm * tau / N2);
    return -1.5 * (1.0 - ic.delta_m * ic.delta_m / 6.0 * e2);
}

PlaneWaveMoments analytic_moments_plane_wave(const PlaneWaveIC& ic, const GridSpec& g,
                                             const PhysicsParams& p, double tau) {
    const double pi = std::numbers::pi;
    const double mm = static_cast<double>(ic.m);
    const double N2 = static_cast<double>(g.N_x) * static_cast<double>(g.N_x);
    const double E = std::exp(-4.0 * pi * pi * mm * mm * tau / N2);
    const double a = 4.0 * pi * mm * p.nu * ic.delta_m / g.L;
    const double d = ic.delta_m * ic.delta_m * E * E;

    PlaneWaveMoments mom;
    mom.u2 = 0.5 * a * a * E * E * (1.0 + 0.75 * d);
    mom.u4 = 0.375 * a * a * a * a * E * E * E * E * (1.0 + 5.0 / 3.0 * d);
    return mom;
}

} // namespace qburgers
