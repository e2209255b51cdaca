#pragma once

// Statevector emulation of the quantum registers.
//
// An AmplitudeState is a unit-norm complex vector plus an explicit real
// `scale` so that scale * amps always reconstructs the raw (unnormalized)
// field data.  The register layout is register-major, most significant
// first:
//
//   index = ((reg_1 ... reg_copies) , flag?) , ensemble
//
// i.e. the first field register owns the leading n_x bits, the optional
// odd-order flag qubit sits after all field registers, and the ensemble
// label register occupies the least significant n_en bits.  Within one
// field register the coarse index is the leading m bits and the sub-grid
// (small-scale) index the trailing n_x - m bits, so coarse-graining is a
// Walsh-Hadamard transform on each register's trailing qubits.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qburgers/fields.hpp"

namespace qburgers {

/// Default cap on total statevector qubits (2^26 amplitudes = 1 GiB).
inline constexpr int kDefaultQubitCeiling = 26;

/// Throws ResourceCeilingError when `needed` exceeds `ceiling`.
void check_qubit_budget(int needed, int ceiling, const std::string& what);

struct RegisterLayout {
    int n_x = 0;        ///< qubits per field register
    int m = 0;          ///< coarse qubits per register; 0 = not coarse-grained
    int copies = 1;     ///< tensor copies of the field register
    bool flag = false;  ///< odd-order flag qubit present
    int n_en = 0;       ///< ensemble label qubits (least significant)

    int total_qubits() const { return copies * n_x + (flag ? 1 : 0) + n_en; }
    bool operator==(const RegisterLayout&) const = default;
};

struct AmplitudeState {
    GridSpec grid;  ///< spatial grid of each field register
    RegisterLayout layout;
    std::vector<std::complex<double>> amps;  ///< unit Euclidean norm
    double scale = 1.0;                      ///< raw-data norm (per copy)
    std::vector<double> member_scales;       ///< per-ensemble-member scales

    int n_qubits() const { return layout.total_qubits(); }
    double norm() const;
};

/// |dpsi> = sum_j (dpsi_j / N) |j> with N = raw_norm stored as scale.
/// Throws NumericGuardError on a zero field.
AmplitudeState amplitude_encode(const PsiDerivField& dpsi,
                                int max_qubits = kDefaultQubitCeiling);

/// amps <- normalize(e^{A tau} amps); scale <- scale * |e^{A tau} amps|,
/// so scale always equals the raw evolved-field norm.  Requires a plain
/// single-register state.
AmplitudeState apply_propagator(const AmplitudeState& s, double tau);

/// Global sign flip: |u> = -|d_x psi>.  Ratio observables are invariant;
/// the flip only keeps the emulated data equal to the velocity field.
AmplitudeState negate_to_velocity(const AmplitudeState& s);

/// Hadamards on the trailing n_x - m qubits.  The |k>|0...0> amplitudes
/// become the block sums 2^{-(n_x-m)/2} * sum_{j in block k} amps_j (the
/// coarse-grained field); everything else is the garbage component, kept
/// in place and removed later by the projector factor inside the
/// correlator operators.
AmplitudeState coarse_grain(const AmplitudeState& s, int m);

/// Basis permutation |j> -> |j + rho mod N_x>; rho may be any integer.
/// The modeled circuit cost (order n_x^2 gates) is charged in the
/// resources module.
AmplitudeState cyclic_shift(const AmplitudeState& s, long long rho);

/// Tensor arrangement holding n field values worth of correlator input:
/// even n = 2k: |u>^(x k); odd n = 2k+1:
/// (|u>^(x k+1) (x) |0_flag> + |u>^(x k) (x) |0...0> (x) |1_flag>)/sqrt(2).
/// Requires a coarse-grained single-copy input.
AmplitudeState build_U_n(const AmplitudeState& s_cg, int n,
                         int max_qubits = kDefaultQubitCeiling);

/// 2^{-n_en/2} sum_alpha |state_alpha>|alpha> with an appended label
/// register.  Member count must be a power of two and all layouts equal.
/// The composite scale is fixed to 1; per-member scales are retained in
/// member_scales for diagnostics.
AmplitudeState ensemble_superpose(const std::vector<AmplitudeState>& states,
                                  int max_qubits = kDefaultQubitCeiling);

/// Binary dump: 8-byte little-endian amplitude count, then each amplitude
/// as little-endian (real, imag) double pairs; layout/scale/grid metadata
/// goes to a JSON sidecar at path + ".json".
void dump_state(const AmplitudeState& s, const std::string& path);
AmplitudeState load_state(const std::string& path);

} // namespace qburgers
