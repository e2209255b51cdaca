#pragma once

// Classical ground truth: direct multi-point statistics of velocity
// grids, the exact-vs-approximate inversion comparison over decaying
// random initial conditions, and the closed-form plane-wave solution
// with its small-amplitude moment series.  Everything here is an oracle
// the quantum-pipeline outputs are checked against.

#include <iosfwd>
#include <vector>

#include "qburgers/fields.hpp"

namespace qburgers {

/// P^(n) = (1/N_x) sum_k u_k * prod_i u_{k+rho_i} with an implicit zero
/// offset; pass n-1 offsets (reduced mod N_x).  All-zero offsets give the
/// coincident moment I^(n).
double brute_force_Pn(const VelocityField& u, const std::vector<long long>& r_offsets);

/// beta = I^(4) / (I^(2))^2 - 3.  Throws NumericGuardError when I^(2)
/// vanishes (flatness undefined).
double flatness(const VelocityField& u);

/// beta(tau) through both inversion routes, from one shared psi history.
struct FlatnessSeries {
    std::vector<double> taus;
    std::vector<double> beta_exact;
    std::vector<double> beta_approx;

    /// Columns tau, beta_exact, beta_approx.
    void write_csv(std::ostream& os) const;
};

/// Decaying-turbulence flatness experiment: draw the random initial
/// condition, evolve psi exactly, and at each time invert both ways.
/// `taus` are diffusion times nu t / L^2 — the unit in which the lowest
/// harmonics decay at order one — and are converted internally to the
/// grid-normalized tau_grid = tau * N_x^2 that the propagator uses.
FlatnessSeries run_figure2(const GridSpec& g, const RandomIC& ic, const PhysicsParams& p,
                           const std::vector<double>& taus);

/// psi(x, tau) = 1 + delta_m sin(2 pi m x / L) exp(-4 pi^2 m^2 tau / N_x^2)
/// for the plane-wave initial condition; tau is grid-normalized.  The
/// exponent is the continuum limit of the discrete eigenvalue (they agree
/// to O((m/N_x)^4 tau)).
PsiField analytic_psi_plane_wave(const PlaneWaveIC& ic, const GridSpec& g,
                                 const PhysicsParams& p, double tau);

/// Truncated small-delta_m series
///   beta = -(3/2) (1 - (delta_m^2/6) exp(-8 pi^2 m^2 tau / N_x^2)),
/// valid through O(delta_m^2); document |delta_m| <= 0.3 for use.
double analytic_beta_plane_wave(const PlaneWaveIC& ic, const GridSpec& g, double tau);

/// Leading-plus-correction volume-averaged moments of the plane-wave
/// velocity field, with a = 4 pi m nu delta_m / L and E the single-mode
/// decay factor:  <u^2> = (a^2/2) E^2 (1 + (3/4) delta_m^2 E^2),
///                <u^4> = (3/8) a^4 E^4 (1 + (5/3) delta_m^2 E^2).
struct PlaneWaveMoments {
    double u2 = 0.0;
    double u4 = 0.0;
};

PlaneWaveMoments analytic_moments_plane_wave(const PlaneWaveIC& ic, const GridSpec& g,
                                             const PhysicsParams& p, double tau);

} // namespace qburgers
