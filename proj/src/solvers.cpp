#include "weld/solvers.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "weld/error.hpp"
#include "weld/fft.hpp"

namespace weld {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using CVec = std::vector<std::complex<double>>;

// φ_j(z) = (e^z - Σ_{i<j} z^i/i!) / z^j, evaluated by Taylor series near 0
// to avoid cancellation and in closed form elsewhere.
std::complex<double> phi(int order, std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        // Σ_{n≥0} z^n / (n+order)!
        double fact = 1.0;
        for (int i = 1; i <= order; ++i) fact *= i;
        std::complex<double> term(1.0 / fact, 0.0);
        std::complex<double> sum = term;
        for (int n = 1; n <= 24; ++n) {
            term *= z / static_cast<double>(n + order);
            sum += term;
        }
        return sum;
    }
    const std::complex<double> ez = std::exp(z);
    switch (order) {
        case 1: return (ez - 1.0) / z;
        case 2: return (ez - 1.0 - z) / (z * z);
        default: return (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
    }
}

struct Etdrk4 {
    CVec E, E2, Q, f1, f2, f3;

    Etdrk4(const CVec& linear, double h) {
        const std::size_t n = linear.size();
        E.resize(n);
        E2.resize(n);
        Q.resize(n);
        f1.resize(n);
        f2.resize(n);
        f3.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::complex<double> z = h * linear[i];
            E[i] = std::exp(z);
            E2[i] = std::exp(0.5 * z);
            Q[i] = 0.5 * h * phi(1, 0.5 * z);
            const auto p1 = phi(1, z), p2 = phi(2, z), p3 = phi(3, z);
            f1[i] = h * (p1 - 3.0 * p2 + 4.0 * p3);
            f2[i] = h * (p2 - 2.0 * p3);
            f3[i] = h * (4.0 * p3 - p2);
        }
    }
};

// One quadratic-nonlinearity pseudo-spectral problem: u_t = L u + c_nl·∂x(u²)/2
// in Fourier space, where the caller fixes the linear symbol and the sign.
class SpectralProblem {
public:
    SpectralProblem(const SpatialGrid& grid) : n_(grid.n_points) {
        grid.validate();
        if (!grid.periodic) throw DataError("spectral solver: grid must be periodic");
        if (!is_power_of_two(n_)) throw DataError("spectral solver: grid size must be a power of two");
        wavenumbers_.resize(n_);
        dealias_.resize(n_);
        const double length = grid.length();
        for (std::size_t i = 0; i < n_; ++i) {
            const double m = (i <= n_ / 2) ? static_cast<double>(i)
                                           : static_cast<double>(i) - static_cast<double>(n_);
            wavenumbers_[i] = kTwoPi * m / length;
            dealias_[i] = std::abs(m) <= static_cast<double>(n_) / 3.0;
        }
    }

    // N(v) = -(i k / 2)·F[ (F⁻¹ v)² ], dealiased
    CVec nonlinear(const CVec& v) const {
        CVec u = v;
        fft_inplace(u, true);
        for (auto& x : u) x = std::complex<double>(x.real() * x.real(), 0.0);
        fft_inplace(u, false);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!dealias_[i]) {
                u[i] = 0.0;
                continue;
            }
            u[i] *= std::complex<double>(0.0, -0.5 * wavenumbers_[i]);
        }
        return u;
    }

    const std::vector<double>& wavenumbers() const { return wavenumbers_; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> wavenumbers_;
    std::vector<char> dealias_;
};

Matrix integrate(const SpectralProblem& prob, const CVec& linear, const std::vector<double>& u0,
                 const TimeGrid& time, std::size_t substeps, const char* name) {
    time.validate();
    if (substeps < 8) throw DataError(std::string(name) + ": substeps must be >= 8");
    if (u0.size() != prob.size()) throw DataError(std::string(name) + ": u0/grid size mismatch");
    const std::size_t n = prob.size();
    const double h = time.dt() / static_cast<double>(substeps);
    Etdrk4 coef(linear, h);

    CVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u0[i];
    fft_inplace(v, false);

    Matrix out(time.n_steps, n);
    for (std::size_t i = 0; i < n; ++i) out(0, i) = u0[i];

    CVec a(n), b(n), c(n);
    for (std::size_t k = 1; k < time.n_steps; ++k) {
        for (std::size_t s = 0; s < substeps; ++s) {
            const CVec Nv = prob.nonlinear(v);
            for (std::size_t i = 0; i < n; ++i) a[i] = coef.E2[i] * v[i] + coef.Q[i] * Nv[i];
            const CVec Na = prob.nonlinear(a);
            for (std::size_t i = 0; i < n; ++i) b[i] = coef.E2[i] * v[i] + coef.Q[i] * Na[i];
            const CVec Nb = prob.nonlinear(b);
            for (std::size_t i = 0; i < n; ++i)
                c[i] = coef.E2[i] * a[i] + coef.Q[i] * (2.0 * Nb[i] - Nv[i]);
            const CVec Nc = prob.nonlinear(c);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = coef.E[i] * v[i] + coef.f1[i] * Nv[i] + 2.0 * coef.f2[i] * (Na[i] + Nb[i]) +
                       coef.f3[i] * Nc[i];
        }
        CVec phys = v;
        fft_inplace(phys, true);
        for (std::size_t i = 0; i < n; ++i) {
            const double val = phys[i].real();
            if (!std::isfinite(val) || std::abs(val) > 1e6)
                throw NumericError(std::string(name) + ": blow-up at output step " +
                                   std::to_string(k));
            out(k, i) = val;
        }
    }
    return out;
}

}  // namespace

std::vector<double> transport_solution(const std::function<double(double)>& g, double t,
                                       const SpatialGrid& grid) {
    grid.validate();
    if (t < 0.0) throw DataError("transport_solution: negative time");
    std::vector<double> u(grid.n_points, 0.0);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double shifted = grid.point(j) - t;
        u[j] = shifted >= grid.domain_start ? g(shifted) : 0.0;
    }
    return u;
}

Matrix solve_burgers(const std::vector<double>& u0, double nu, const TimeGrid& time,
                     const SpatialGrid& grid, std::size_t substeps) {
    if (!(nu > 0.0)) throw DataError("solve_burgers: nu must be positive");
    SpectralProblem prob(grid);
    CVec linear(prob.size());
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double k = prob.wavenumbers()[i];
        linear[i] = {-nu * k * k, 0.0};
    }
    return integrate(prob, linear, u0, time, substeps, "solve_burgers");
}

Matrix solve_kdv(const std::vector<double>& u0, const TimeGrid& time, const SpatialGrid& grid,
                 std::size_t substeps) {
    SpectralProblem prob(grid);
    CVec linear(prob.size());
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double k = prob.wavenumbers()[i];
        linear[i] = {0.0, k * k * k};
    }
    return integrate(prob, linear, u0, time, substeps, "solve_kdv");
}

}  // namespace weld
