#pragma once

// Sparse correlation operators and the overlap-estimation readout.
//
// The two-point operator on the full grid is C2(rho) = (P^rho + P^-rho)/2
// with P the cyclic increment.  On the coarse grid the order-n tensor is
// the symmetrized indicator of the offset pattern (s, s+rho_1, ...,
// s+rho_{n-1}); C_tilde arranges that tensor between the row and column
// register blocks of the U^(n) state (split around the flag qubit for odd
// n) and tensors a |0><0| projector onto every sub-grid register, which
// is what removes the coarse-graining garbage.  Expectation values of
// these operators against U^(n) states reproduce exactly the classical
// multi-point sums of the coarse-grained velocity field; the three
// readout modes dress them with the measurement-noise models.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include <json.hpp>

#include "qburgers/fields.hpp"
#include "qburgers/qstate.hpp"

namespace qburgers {

struct SparseEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

struct SparseCorrelator {
    std::size_t dim = 0;
    std::vector<SparseEntry> entries;  ///< symmetric: (r,c,v) iff (c,r,v)
    int order_n = 0;
    std::vector<long long> offsets;    ///< the n-1 separations (reduced)
    long long sparsity_bound = 0;      ///< n! for the coarse operators
    double alpha = 1.0;                ///< block-encoding normalization
};

enum class ReadoutMode { Exact, Gaussian, Shot };

struct ReadoutNoise {
    ReadoutMode mode = ReadoutMode::Exact;
    double epsilon3 = 0.0;      ///< target additive error of one estimate
    long long repetitions = 0;  ///< shot mode: single-shot sample count
    std::uint64_t seed = 0;

    /// epsilon3 == 0 forces exact readout regardless of the mode tag.
    ReadoutMode effective_mode() const;
    ReadoutNoise with_seed(std::uint64_t s) const;
};

struct CorrelationRow {
    int n = 0;
    int m = 0;
    std::vector<long long> rho;  ///< coarse-grid offsets
    std::vector<double> r;       ///< physical separations 2^{n_x-m} rho dx
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    double error_bound = 0.0;
};

struct CorrelationResult {
    std::vector<CorrelationRow> rows;

    /// Header plus one line per row; rho/r padded to the widest order in
    /// the result so mixed-n sweeps share one rectangular table.
    void write_csv(std::ostream& os) const;
    nlohmann::json to_json() const;
};

/// C2(rho) on the full N_x grid; rho is reduced mod N_x.  Dirichlet grids
/// are rejected (the cyclic decomposition assumes periodicity).
SparseCorrelator build_C2(const GridSpec& g, long long rho);

/// Symmetrized weights of the order-n offset pattern: every distinct
/// arrangement of (0, rho_1, ..., rho_{n-1}) mod 2^m, each weighted
/// 1/#arrangements (so coincident offsets merge with summed weight and
/// the all-zero pattern keeps weight 1).
std::map<std::vector<long long>, double> symmetrized_support(
    int m, int n, const std::vector<long long>& rho_vec);

/// The order-n correlation tensor on the coarse grid: for n = 2 the
/// 2^m x 2^m matrix matching build_C2 restricted to the coarse points;
/// for n >= 3 a diagonal operator on the 2^{nm} multi-index space.
SparseCorrelator build_Cn(int m, int n, const std::vector<long long>& rho_vec);

/// The readout operator matching the build_U_n register layout,
/// including the sub-grid |0><0| projectors.  Offsets are reduced mod 2^m.
SparseCorrelator build_Ctilde(int n_x, int m, int n, const std::vector<long long>& rho_vec);

/// <s|C|s> under the selected readout model.  Exact: sparse application.
/// Gaussian: adds one N(0, sigma) draw with sigma = eps3 * 2^{-(n-2)m/2},
/// the precision target of the overlap-estimation contract.  Shot:
/// averages `repetitions` +-1 Hadamard-test samples with mean <C>/alpha
/// and rescales by alpha.  A trailing ensemble register is traced through
/// automatically.
double expectation(const AmplitudeState& s, const SparseCorrelator& C,
                   const ReadoutNoise& noise);

/// ratio = <C_tilde(rho)> / <C_tilde(0)>, both measured with independent
/// noise substreams.  `s` must be the matching build_U_n output (or the
/// plain full-resolution state for n = 2, where the C2 path is used).
/// Throws NumericGuardError when the denominator sits below 10x the
/// readout noise level (the coincident moment is too small to normalize).
CorrelationResult ratio_Pn_over_In(const AmplitudeState& s, int n, int m,
                                   const std::vector<long long>& rho_vec,
                                   const ReadoutNoise& noise);

/// Same ratio against an ensemble superposition: the label register makes
/// the expectation the plain mean of per-member expectations, so this is
/// the ensemble-averaged P^(n)/I^(n).
CorrelationResult ensemble_ratio(const AmplitudeState& s_en, int n, int m,
                                 const std::vector<long long>& rho_vec,
                                 const ReadoutNoise& noise);

} // namespace qburgers
