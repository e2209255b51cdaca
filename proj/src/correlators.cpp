#include "qburgers/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "qburgers/errors.hpp"
#include "qburgers/io.hpp"
#include "qburgers/rng.hpp"

namespace qburgers {

namespace {

long long reduce_mod(long long v, long long modulus) {
    return ((v % modulus) + modulus) % modulus;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

using EntryMap = std::map<std::pair<std::size_t, std::size_t>, double>;

SparseCorrelator finish(EntryMap&& map, std::size_t dim, int n,
                        std::vector<long long> offsets, long long sparsity, double alpha) {
    SparseCorrelator c;
    c.dim = dim;
    c.order_n = n;
    c.offsets = std::move(offsets);
    c.sparsity_bound = sparsity;
    c.alpha = alpha;
    c.entries.reserve(map.size());
    for (const auto& [rc, v] : map) c.entries.push_back({rc.first, rc.second, v});
    return c;
}

} // namespace

ReadoutMode ReadoutNoise::effective_mode() const {
    if (mode != ReadoutMode::Shot && epsilon3 == 0.0) return ReadoutMode::Exact;
    return mode;
}

ReadoutNoise ReadoutNoise::with_seed(std::uint64_t s) const {
    ReadoutNoise n = *this;
    n.seed = s;
    return n;
}

SparseCorrelator build_C2(const GridSpec& g, long long rho) {
    if (g.bc != BoundaryCondition::Periodic)
        throw DomainError("build_C2: unsupported boundary condition (periodic required)");
    const auto N = static_cast<long long>(g.N_x);
    const long long r = reduce_mod(rho, N);

    EntryMap map;
    for (long long j = 0; j < N; ++j) {
        map[{static_cast<std::size_t>(j), static_cast<std::size_t>(reduce_mod(j + r, N))}] += 0.5;
        map[{static_cast<std::size_t>(j), static_cast<std::size_t>(reduce_mod(j - r, N))}] += 0.5;
    }
    return finish(std::move(map), g.N_x, 2, {r}, 2, 1.0);
}

std::map<std::vector<long long>, double> symmetrized_support(
    int m, int n, const std::vector<long long>& rho_vec) {
    if (n < 2) throw DomainError("symmetrized_support: n must be >= 2");
    if (static_cast<int>(rho_vec.size()) != n - 1)
        throw DomainError("symmetrized_support: expected n-1 offsets");
    const long long modulus = 1LL << m;

    std::vector<long long> base(static_cast<std::size_t>(n));
    base[0] = 0;
    for (std::size_t i = 0; i + 1 < base.size(); ++i)
        base[i + 1] = reduce_mod(rho_vec[i], modulus);
    std::sort(base.begin(), base.end());

    // Every distinct arrangement of the offset pattern, each carrying the
    // averaged-permutation weight 1/#arrangements; coincident offsets thus
    // merge instead of inflating the total weight.
    std::vector<std::vector<long long>> arrangements;
    do {
        arrangements.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));

    std::map<std::vector<long long>, double> support;
    const double w = 1.0 / static_cast<double>(arrangements.size());
    for (auto& a : arrangements) support[std::move(a)] = w;
    return support;
}

SparseCorrelator build_Cn(int m, int n, const std::vector<long long>& rho_vec) {
    if (m < 1 || m > 30) throw DomainError("build_Cn: m must lie in [1, 30]");
    const long long modulus = 1LL << m;
    for (long long r : rho_vec)
        if (r < -modulus || r >= modulus)
            throw DomainError("build_Cn: offset out of the coarse-grid range");
    const auto support = symmetrized_support(m, n, rho_vec);

    std::vector<long long> reduced;
    for (long long r : rho_vec) reduced.push_back(reduce_mod(r, modulus));

    EntryMap map;
    if (n == 2) {
        // Matrix form on the coarse grid, same shape as build_C2.
        for (long long s = 0; s < modulus; ++s)
            for (const auto& [a, w] : support)
                map[{static_cast<std::size_t>(reduce_mod(s + a[0], modulus)),
                     static_cast<std::size_t>(reduce_mod(s + a[1], modulus))}] += w;
        return finish(std::move(map), static_cast<std::size_t>(modulus), 2, reduced, 2, 1.0);
    }

    // n >= 3: diagonal operator on the flattened multi-index space.
    for (long long s = 0; s < modulus; ++s) {
        for (const auto& [a, w] : support) {
            std::size_t flat = 0;
            for (long long ai : a)
                flat = (flat << m) | static_cast<std::size_t>(reduce_mod(s + ai, modulus));
            map[{flat, flat}] += w;
        }
    }
    const std::size_t dim = std::size_t{1} << (static_cast<std::size_t>(n) * m);
    const auto nfact = static_cast<long long>(factorial(n));
    return finish(std::move(map), dim, n, reduced, nfact, factorial(n));
}

SparseCorrelator build_Ctilde(int n_x, int m, int n,
                              const std::vector<long long>& rho_vec) {
    if (m < 1 || m > n_x) throw DomainError("build_Ctilde: m must lie in [1, n_x]");
    if (n < 2) throw DomainError("build_Ctilde: n must be >= 2");
    const long long modulus = 1LL << m;
    const auto support = symmetrized_support(m, n, rho_vec);
    const int sub_shift = n_x - m;  // coarse index k sits at register value k << sub_shift

    std::vector<long long> reduced;
    for (long long r : rho_vec) reduced.push_back(reduce_mod(r, modulus));

    const bool odd = (n % 2 != 0);
    const int row_regs = odd ? (n + 1) / 2 : n / 2;  // columns take the remaining n - row_regs

    EntryMap map;
    for (long long s = 0; s < modulus; ++s) {
        for (const auto& [a, w] : support) {
            // Concatenate the first row_regs indices into the row address
            // and the rest into the column address; sub-grid bits stay 0,
            // which is the projector part of the operator.
            std::size_t row = 0;
            for (int i = 0; i < row_regs; ++i)
                row = (row << n_x) |
                      (static_cast<std::size_t>(reduce_mod(s + a[static_cast<std::size_t>(i)],
                                                           modulus))
                       << sub_shift);
            std::size_t col = 0;
            for (int i = row_regs; i < n; ++i)
                col = (col << n_x) |
                      (static_cast<std::size_t>(reduce_mod(s + a[static_cast<std::size_t>(i)],
                                                           modulus))
                       << sub_shift);
            if (odd) {
                col = (col << n_x);       // parked |0...0> register
                row = (row << 1);         // flag 0
                col = (col << 1) | 1u;    // flag 1
            }
            map[{row, col}] += 0.5 * w;
            map[{col, row}] += 0.5 * w;
        }
    }

    const int total_qubits = row_regs * n_x + (odd ? 1 : 0);
    const std::size_t dim = std::size_t{1} << total_qubits;
    const auto nfact_ll = static_cast<long long>(factorial(n));
    return finish(std::move(map), dim, n, reduced, nfact_ll, factorial(n));
}

namespace {

double exact_expectation(const AmplitudeState& s, const SparseCorrelator& C) {
    const std::size_t sectors = s.amps.size() / C.dim;
    double acc = 0.0;
    for (const auto& e : C.entries) {
        double part = 0.0;
        for (std::size_t alpha = 0; alpha < sectors; ++alpha)
            part += (std::conj(s.amps[e.row * sectors + alpha]) *
                     s.amps[e.col * sectors + alpha])
                        .real();
        acc += e.value * part;
    }
    // The label register carries 1/N_en per member, so `acc` is already
    // the ensemble-averaged expectation.
    return acc;
}

/// 2^{-(n-2) m / 2}: how the overlap target shrinks with order and
/// coarse level; readout noise is calibrated against it.
double precision_scale(const AmplitudeState& s, const SparseCorrelator& C) {
    const int m_eff = s.layout.m > 0 ? s.layout.m : s.layout.n_x;
    return std::exp2(-0.5 * static_cast<double>((C.order_n - 2) * m_eff));
}

} // namespace

double expectation(const AmplitudeState& s, const SparseCorrelator& C,
                   const ReadoutNoise& noise) {
    if (C.dim == 0 || s.amps.size() % C.dim != 0 ||
        s.amps.size() / C.dim != (std::size_t{1} << s.layout.n_en))
        throw DomainError("expectation: operator/state dimension mismatch");

    const double truth = exact_expectation(s, C);
    switch (noise.effective_mode()) {
        case ReadoutMode::Exact:
            return truth;
        case ReadoutMode::Gaussian: {
            Rng rng(noise.seed);
            return truth + noise.epsilon3 * precision_scale(s, C) * rng.normal();
        }
        case ReadoutMode::Shot: {
            if (noise.repetitions <= 0)
                throw DomainError("expectation: shot mode needs repetitions >= 1");
            // Hadamard-test sampling of the alpha-normalized operator:
            // each shot returns +-1 with mean <C>/alpha.
            const double p = std::clamp(0.5 * (1.0 + truth / C.alpha), 0.0, 1.0);
            Rng rng(noise.seed);
            long long plus = 0;
            for (long long i = 0; i < noise.repetitions; ++i)
                if (rng.uniform01() < p) ++plus;
            const double mean =
                2.0 * static_cast<double>(plus) / static_cast<double>(noise.repetitions) - 1.0;
            return C.alpha * mean;
        }
    }
    throw DomainError("expectation: unknown readout mode");
}

namespace {

double noise_level(const ReadoutNoise& noise, const AmplitudeState& s,
                   const SparseCorrelator& C) {
    switch (noise.effective_mode()) {
        case ReadoutMode::Exact:
            return 1e-13 * precision_scale(s, C);
        case ReadoutMode::Gaussian:
            return noise.epsilon3 * precision_scale(s, C);
        case ReadoutMode::Shot:
            return C.alpha / std::sqrt(static_cast<double>(std::max(1LL, noise.repetitions)));
    }
    return 0.0;
}

CorrelationResult ratio_impl(const AmplitudeState& s, int n, int m,
                             const std::vector<long long>& rho_vec,
                             const ReadoutNoise& noise) {
    if (n < 2) throw DomainError("ratio: n must be >= 2");
    if (static_cast<int>(rho_vec.size()) != n - 1)
        throw DomainError("ratio: expected n-1 offsets");
    const RegisterLayout& l = s.layout;

    SparseCorrelator num_op, den_op;
    if (l.m == 0) {
        // Full-resolution two-point path: C2 built from cyclic shifts.
        if (n != 2 || l.copies != 1 || l.flag)
            throw DomainError("ratio: full-resolution state only supports n = 2");
        if (m != l.n_x)
            throw DomainError("ratio: full-resolution path requires m = n_x");
        num_op = build_C2(s.grid, rho_vec[0]);
        den_op = build_C2(s.grid, 0);
    } else {
        if (l.m != m) throw DomainError("ratio: state coarse level differs from m");
        const int want_copies = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
        if (l.copies != want_copies || l.flag != (n % 2 != 0))
            throw DomainError("ratio: state layout does not match order n");
        num_op = build_Ctilde(l.n_x, m, n, rho_vec);
        den_op = build_Ctilde(l.n_x, m, n, std::vector<long long>(rho_vec.size(), 0));
    }

    // Numerator and denominator are measured independently.
    const Rng seeder(noise.seed);
    const double num = expectation(s, num_op, noise.with_seed(seeder.split(1).seed()));
    const double den = expectation(s, den_op, noise.with_seed(seeder.split(2).seed()));

    const double level = noise_level(noise, s, den_op);
    if (std::abs(den) < 10.0 * level)
        throw NumericGuardError("ratio: ill-conditioned, |I^(n)| = " + format_g17(den) +
                                " below 10x the readout noise level " + format_g17(level));

    CorrelationRow row;
    row.n = n;
    row.m = m;
    row.rho = num_op.offsets;
    const double block = std::exp2(static_cast<double>(l.n_x - m));
    for (long long r : row.rho) row.r.push_back(block * static_cast<double>(r) * s.grid.dx);
    row.numerator = num;
    row.denominator = den;
    row.ratio = num / den;
    // Emulated evolution and operator encodings are exact (eps1 = eps2 =
    // eps4 = 0); only the readout target survives in the bound.
    row.error_bound = noise.epsilon3;

    CorrelationResult res;
    res.rows.push_back(std::move(row));
    return res;
}

} // namespace

CorrelationResult ratio_Pn_over_In(const AmplitudeState& s, int n, int m,
                                   const std::vector<long long>& rho_vec,
                                   const ReadoutNoise& noise) {
    return ratio_impl(s, n, m, rho_vec, noise);
}

CorrelationResult ensemble_ratio(const AmplitudeState& s_en, int n, int m,
                                 const std::vector<long long>& rho_vec,
                                 const ReadoutNoise& noise) {
    // A one-member ensemble has zero label qubits, so the superposition
    // evidence is the member_scales bookkeeping, not the register width.
    if (s_en.member_scales.empty())
        throw DomainError("ensemble_ratio: state was not built by ensemble_superpose");
    return ratio_impl(s_en, n, m, rho_vec, noise);
}

void CorrelationResult::write_csv(std::ostream& os) const {
    std::size_t K = 1;
    for (const auto& row : rows) K = std::max(K, row.rho.size());

    std::vector<std::string> header{"n", "m"};
    for (std::size_t i = 1; i <= K; ++i) header.push_back("rho_" + std::to_string(i));
    for (std::size_t i = 1; i <= K; ++i) header.push_back("r_" + std::to_string(i));
    header.insert(header.end(), {"numerator", "denominator", "ratio", "error_bound"});
    os << csv_join(header) << '\n';

    for (const auto& row : rows) {
        std::vector<std::string> cells{std::to_string(row.n), std::to_string(row.m)};
        for (std::size_t i = 0; i < K; ++i)
            cells.push_back(i < row.rho.size() ? std::to_string(row.rho[i]) : std::string());
        for (std::size_t i = 0; i < K; ++i)
            cells.push_back(i < row.r.size() ? format_g17(row.r[i]) : std::string());
        cells.push_back(format_g17(row.numerator));
        cells.push_back(format_g17(row.denominator));
        cells.push_back(format_g17(row.ratio));
        cells.push_back(format_g17(row.error_bound));
        os << csv_join(cells) << '\n';
    }
}

nlohmann::json CorrelationResult::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        arr.push_back({{"n", row.n},
                       {"m", row.m},
                       {"rho", row.rho},
                       {"r", row.r},
                       {"numerator", row.numerator},
                       {"denominator", row.denominator},
                       {"ratio", row.ratio},
                       {"error_bound", row.error_bound}});
    }
    return arr;
}

} // namespace qburgers
