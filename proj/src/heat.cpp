#include "qburgers/heat.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qburgers/errors.hpp"
#include "qburgers/numeric.hpp"

namespace qburgers {

namespace {

constexpr std::size_t kDenseCeiling = std::size_t{1} << 12;

struct FftwRealDeleter {
    void operator()(double* p) const { fftw_free(p); }
};
struct FftwComplexDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

double eigenvalue(std::size_t k, std::size_t N) {
    return -2.0 + 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(N));
}

// Periodic evolution of a real vector: r2c transform, scale mode k by
// exp(lambda_k tau), c2r back (FFTW transforms are unnormalized, hence
// the final 1/N).
std::vector<double> evolve_periodic(const std::vector<double>& x, double tau) {
    const std::size_t N = x.size();
    std::unique_ptr<double, FftwRealDeleter> buf(fftw_alloc_real(N));
    std::unique_ptr<fftw_complex, FftwComplexDeleter> spec(fftw_alloc_complex(N / 2 + 1));

    FftwPlan fwd(fftw_plan_dft_r2c_1d(static_cast<int>(N), buf.get(), spec.get(),
                                      FFTW_ESTIMATE));
    FftwPlan bwd(fftw_plan_dft_c2r_1d(static_cast<int>(N), spec.get(), buf.get(),
                                      FFTW_ESTIMATE));

    std::copy(x.begin(), x.end(), buf.get());
    fftw_execute(fwd.get());
    for (std::size_t k = 0; k <= N / 2; ++k) {
        const double f = std::exp(eigenvalue(k, N) * tau);
        spec.get()[k][0] *= f;
        spec.get()[k][1] *= f;
    }
    fftw_execute(bwd.get());

    std::vector<double> y(N);
    const double inv = 1.0 / static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j) y[j] = buf.get()[j] * inv;
    return y;
}

std::vector<std::complex<double>> evolve_periodic(const std::vector<std::complex<double>>& x,
                                                  double tau) {
    const std::size_t N = x.size();
    std::unique_ptr<fftw_complex, FftwComplexDeleter> buf(fftw_alloc_complex(N));

    FftwPlan fwd(fftw_plan_dft_1d(static_cast<int>(N), buf.get(), buf.get(), FFTW_FORWARD,
                                  FFTW_ESTIMATE));
    FftwPlan bwd(fftw_plan_dft_1d(static_cast<int>(N), buf.get(), buf.get(), FFTW_BACKWARD,
                                  FFTW_ESTIMATE));

    for (std::size_t j = 0; j < N; ++j) {
        buf.get()[j][0] = x[j].real();
        buf.get()[j][1] = x[j].imag();
    }
    fftw_execute(fwd.get());
    for (std::size_t k = 0; k < N; ++k) {
        const double f = std::exp(eigenvalue(k, N) * tau);
        buf.get()[k][0] *= f;
        buf.get()[k][1] *= f;
    }
    fftw_execute(bwd.get());

    std::vector<std::complex<double>> y(N);
    const double inv = 1.0 / static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j)
        y[j] = std::complex<double>(buf.get()[j][0] * inv, buf.get()[j][1] * inv);
    return y;
}

Eigen::MatrixXd dense_exponential(const GridSpec& g, double tau) {
    const Eigen::MatrixXd A = build_laplacian(g).dense();
    return (A * tau).exp();
}

} // namespace

std::vector<double> LaplacianMatrix::apply(const std::vector<double>& x) const {
    const std::size_t N = grid.N_x;
    if (x.size() != N) throw DomainError("LaplacianMatrix::apply: size mismatch");
    std::vector<double> y(N);
    for (std::size_t j = 0; j < N; ++j) {
        double s = -2.0 * x[j];
        if (grid.bc == BoundaryCondition::Periodic) {
            s += x[(j + 1) % N] + x[(j + N - 1) % N];
        } else {
            if (j + 1 < N) s += x[j + 1];
            if (j > 0) s += x[j - 1];
        }
        y[j] = s;
    }
    return y;
}

Eigen::MatrixXd LaplacianMatrix::dense() const {
    const std::size_t N = grid.N_x;
    if (N > kDenseCeiling)
        throw ResourceCeilingError("LaplacianMatrix::dense: N_x = " + std::to_string(N) +
                                   " exceeds the dense ceiling 2^12");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N),
                                              static_cast<Eigen::Index>(N));
    for (std::size_t j = 0; j < N; ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        A(i, i) = -2.0;
        if (grid.bc == BoundaryCondition::Periodic) {
            A(i, static_cast<Eigen::Index>((j + 1) % N)) += 1.0;
            A(i, static_cast<Eigen::Index>((j + N - 1) % N)) += 1.0;
        } else {
            if (j + 1 < N) A(i, i + 1) = 1.0;
            if (j > 0) A(i, i - 1) = 1.0;
        }
    }
    return A;
}

LaplacianMatrix build_laplacian(const GridSpec& g) { return LaplacianMatrix{g}; }

UnitaryDilation block_encode(const LaplacianMatrix& A, double epsilon2_budget) {
    if (!(epsilon2_budget >= 0.0 && epsilon2_budget < 1.0))
        throw DomainError("block_encode: epsilon2 budget must lie in [0, 1)");
    const std::size_t N = A.grid.N_x;
    if (N > (std::size_t{1} << 10))
        throw ResourceCeilingError("block_encode: N_x = " + std::to_string(N) +
                                   " exceeds the dense dilation ceiling 2^10");

    const auto n = static_cast<Eigen::Index>(N);
    const Eigen::MatrixXd B = A.dense() / 6.0;  // spectrum inside [-2/3, 0]

    // sqrt(1 - B^2) through the eigenbasis of B; both blocks then commute,
    // which is exactly what makes the 2x2 block arrangement unitary.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    Eigen::VectorXd d = es.eigenvalues();
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s(i) = std::sqrt(std::max(0.0, 1.0 - d(i) * d(i)));
    const Eigen::MatrixXd S =
        es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();

    UnitaryDilation u;
    u.alpha = 6.0;
    u.ancilla_count = A.grid.n_x + 3;
    u.dilation_ancillas = 1;
    u.epsilon2 = 0.0;
    u.matrix.resize(2 * n, 2 * n);
    u.matrix.topLeftCorner(n, n) = B;
    u.matrix.topRightCorner(n, n) = S;
    u.matrix.bottomLeftCorner(n, n) = S;
    u.matrix.bottomRightCorner(n, n) = -B;
    return u;
}

std::vector<double> heat_evolve(const std::vector<double>& x, const GridSpec& g, double tau) {
    if (tau < 0.0) throw DomainError("heat_evolve: tau must be >= 0");
    if (x.size() != g.N_x) throw DomainError("heat_evolve: size mismatch");
    require_finite(x, "heat_evolve: input");
    if (tau == 0.0) return x;
    if (g.bc == BoundaryCondition::Periodic) return evolve_periodic(x, tau);

    const Eigen::MatrixXd E = dense_exponential(g, tau);
    Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd y = E * v;
    return std::vector<double>(y.data(), y.data() + y.size());
}

std::vector<std::complex<double>> heat_evolve(const std::vector<std::complex<double>>& x,
                                              const GridSpec& g, double tau) {
    if (tau < 0.0) throw DomainError("heat_evolve: tau must be >= 0");
    if (x.size() != g.N_x) throw DomainError("heat_evolve: size mismatch");
    require_finite(x, "heat_evolve: input");
    if (tau == 0.0) return x;
    if (g.bc == BoundaryCondition::Periodic) return evolve_periodic(x, tau);

    const Eigen::MatrixXd E = dense_exponential(g, tau);
    Eigen::Map<const Eigen::VectorXcd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXcd y = E * v;
    return std::vector<std::complex<double>>(y.data(), y.data() + y.size());
}

PsiDerivField propagate(const PsiDerivField& dpsi, double tau) {
    return PsiDerivField{dpsi.grid, heat_evolve(dpsi.values, dpsi.grid, tau)};
}

PsiField propagate(const PsiField& psi, double tau) {
    return PsiField{psi.grid, heat_evolve(psi.values, psi.grid, tau)};
}

namespace {

double ratio_of_norms(const std::vector<double>& before, const std::vector<double>& after) {
    double n0 = 0.0, n1 = 0.0;
    for (double v : before) n0 += v * v;
    for (double v : after) n1 += v * v;
    n0 = std::sqrt(n0);
    n1 = std::sqrt(n1);
    if (n1 < 1e-30)
        throw NumericGuardError("norm_ratio: overflow guard, evolved norm fully decayed");
    return n0 / n1;
}

} // namespace

double norm_ratio(const PsiDerivField& dpsi0, double tau) {
    return ratio_of_norms(dpsi0.values, heat_evolve(dpsi0.values, dpsi0.grid, tau));
}

double norm_ratio(const PsiField& psi0, double tau) {
    return ratio_of_norms(psi0.values, heat_evolve(psi0.values, psi0.grid, tau));
}

EvolutionCost cost_of_evolution(double norm_ratio, double tau, double eps1, double eps2,
                                int n_x) {
    if (!(eps1 > 0.0 && eps1 < 1.0) || !(eps2 > 0.0 && eps2 < 1.0))
        throw DomainError("cost_of_evolution: tolerances must lie in (0, 1)");
    if (tau < 0.0) throw DomainError("cost_of_evolution: tau must be >= 0");
    if (!(norm_ratio > 0.0)) throw DomainError("cost_of_evolution: norm ratio must be positive");
    if (n_x < 1) throw DomainError("cost_of_evolution: n_x must be >= 1");

    EvolutionCost c;
    c.propagator_queries = norm_ratio * tau * log_pow(1.0 / eps1, 2.0);
    c.encode_queries = norm_ratio;
    c.gates = static_cast<double>(n_x) + log_pow(18.0 / eps2, 2.5);
    c.error_bound = eps1 + eps2 * tau;
    return c;
}

} // namespace qburgers
