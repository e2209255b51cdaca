#pragma once

// Scalar fields on a 1-D grid of N_x = 2^n_x sites, and the Cole-Hopf
// transform chain that linearizes viscous Burgers flow:
//
//     u(x)  --forward-->   psi(x) = exp(-(1/2nu) * int_0^x u dx')
//     psi   --heat equation-->   psi(x, t)
//     u  =  -2 nu * (d_x psi) / psi           (exact inversion)
//     u ~=  -2 nu * (d_x psi) / mean(psi)     (linear-readout inversion)
//
// The grid is uniform, x_j = j * dx with dx = L / N_x, and all spatial
// stencils here are periodic central differences.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qburgers {

enum class BoundaryCondition { Periodic, Dirichlet };

/// Uniform grid with a power-of-two site count.
struct GridSpec {
    int n_x = 0;          ///< qubit count of the site register
    std::size_t N_x = 0;  ///< number of sites, 2^n_x
    double L = 0.0;       ///< domain length
    double dx = 0.0;      ///< site spacing L / N_x
    BoundaryCondition bc = BoundaryCondition::Periodic;

    /// Validates n_x in [1, 30] and L > 0.
    static GridSpec make(int n_x, double L,
                         BoundaryCondition bc = BoundaryCondition::Periodic);
};

/// Physical parameters of a run.  `tau` is the grid-normalized time
/// nu * t / dx^2, the natural unit of the discrete diffusion operator.
struct PhysicsParams {
    double nu = 1.0;
    double tau = 0.0;
};

struct VelocityField {
    GridSpec grid;
    std::vector<double> values;
};

struct PsiField {
    GridSpec grid;
    std::vector<double> values;

    /// Arithmetic average of the values (compensated summation).
    double mean() const;
};

struct PsiDerivField {
    GridSpec grid;
    std::vector<double> values;

    /// Euclidean norm of the values; the normalization constant of the
    /// amplitude encoding.
    double raw_norm() const;
};

/// Single-harmonic initial condition psi = 1 + delta_m * sin(2 pi m x / L).
struct PlaneWaveIC {
    double delta_m = 0.1;  ///< amplitude, |delta_m| < 1 so psi stays positive
    int m = 1;             ///< wavenumber, 1 <= m < N_x / 2
};

/// Random smooth positive initial condition
///   psi = exp(xi_0 + sum_{k=1..j_max} xi_k cos(2 pi k x / L)
///                                   + xi_{j_max+k} sin(2 pi k x / L)),
/// with all xi i.i.d. Gaussian of standard deviation sigma_xi, drawn in
/// index order from the seed's stream.
struct RandomIC {
    double sigma_xi = 0.3;
    int j_max = 5;
    std::uint64_t seed = 0;
};

/// sin(2 pi p / N) for p in [0, N), folded from a quarter-wave table so
/// that s[p + N/2] == -s[p] holds bitwise.  Shared by the plane-wave
/// constructors and their analytic references.
std::vector<double> exact_sine_table(std::size_t N);

/// psi_j = 1 + delta_m * sin(2 pi m j / N_x), built from an exactly
/// antisymmetric sine table so the field mean is 1 to machine precision.
PsiField make_plane_wave_ic(const GridSpec& g, const PlaneWaveIC& ic);

PsiField make_random_ic(const GridSpec& g, const RandomIC& ic);

/// Integrates u into the exponent with a cumulative trapezoidal rule,
/// fixing psi_0 = 1.  Trapezoid keeps the forward/inverse round trip at
/// O(dx^2), the order of the central-difference inversion.
PsiField cole_hopf_forward(const VelocityField& u, const PhysicsParams& p);

/// Periodic central difference (psi_{j+1} - psi_{j-1}) / (2 dx).
PsiDerivField derivative(const PsiField& psi);

/// u_j = -2 nu * dpsi_j / psi_j.  Throws NumericGuardError when some
/// |psi_j| is negligibly small relative to max|psi| (division hazard).
VelocityField cole_hopf_inverse_exact(const PsiField& psi, const PhysicsParams& p);

/// Prefactor normalization of the linear-readout inversion.  TwoNu matches
/// the exact map as fluctuations vanish and is the default; Nu halves the
/// amplitude.  Any statistic formed as a ratio of velocity moments is
/// invariant under the choice, since numerator and denominator rescale
/// together.
enum class ApproxPrefactor { TwoNu, Nu };

/// u_j ~= -pref * nu * dpsi_j / psi_bar: the pointwise denominator of the
/// exact inversion replaced by the spatial average, which is what a linear
/// quantum readout of |dpsi> realizes.  Throws NumericGuardError when
/// psi_bar is zero to round-off.
VelocityField cole_hopf_inverse_approx(const PsiDerivField& dpsi, double psi_bar,
                                       const PhysicsParams& p,
                                       ApproxPrefactor pref = ApproxPrefactor::TwoNu);

/// Effective Reynolds number u_rms * l / nu for a stirring scale l.
double reynolds_diagnostic(const VelocityField& u, const PhysicsParams& p, double l);

} // namespace qburgers
