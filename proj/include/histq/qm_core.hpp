#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace histq {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

[[nodiscard]] double max_abs(const Matrix& a);

[[nodiscard]] bool is_hermitian(const Matrix& a, double tol);
[[nodiscard]] bool is_hermitian(const Matrix& a);

/// Hermitian and idempotent to the projector tolerance.
[[nodiscard]] bool is_projector(const Matrix& a, double tol);
[[nodiscard]] bool is_projector(const Matrix& a);

[[nodiscard]] bool is_unitary(const Matrix& u, double tol);

/// Kronecker product of the factors in listed order; the leftmost factor is the earliest time.
[[nodiscard]] Matrix tensor_product(std::span<const Matrix> ops);
[[nodiscard]] Matrix tensor_product(std::initializer_list<Matrix> ops);
[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

/// Integer power for tensor dimensions. Throws on overflow past `cap`.
[[nodiscard]] std::size_t int_pow(std::size_t base, std::size_t exp);

struct SpectralTerm {
    double weight;
    Vector vector;
};

/// Single-time Hilbert space, generator and initial state. Immutable after construction.
class SystemModel {
public:
    /// Validates the Hamiltonian (Hermitian) and rho (Hermitian, PSD, unit trace) and
    /// computes the spectral resolution of rho, weights in descending order.
    SystemModel(Matrix hamiltonian, Matrix rho, double t0 = 0.0);

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(hamiltonian_.rows()); }
    [[nodiscard]] const Matrix& hamiltonian() const { return hamiltonian_; }
    [[nodiscard]] const Matrix& rho() const { return rho_; }
    [[nodiscard]] double t0() const { return t0_; }
    [[nodiscard]] const std::vector<SpectralTerm>& spectral() const { return spectral_; }

    /// Eigenvalues of rho (same order as `spectral`).
    [[nodiscard]] Eigen::VectorXd weights() const;
    /// Orthonormal eigenbasis of rho as columns (same order as `spectral`).
    [[nodiscard]] Matrix eigenbasis() const;

private:
    Matrix hamiltonian_;
    Matrix rho_;
    double t0_;
    std::vector<SpectralTerm> spectral_;
    Eigen::VectorXd energies_;
    Matrix energy_basis_;

    friend Matrix evolve(const SystemModel&, double);
};

class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times, double origin = 0.0);

    [[nodiscard]] const std::vector<double>& times() const { return times_; }
    [[nodiscard]] double origin() const { return origin_; }
    [[nodiscard]] bool contains(double t) const;
    [[nodiscard]] std::size_t size() const { return times_.size(); }

private:
    std::vector<double> times_;
    double origin_;
};

/// U(t, t0) = exp(-i H (t - t0)) through the Hermitian eigendecomposition of H.
[[nodiscard]] Matrix evolve(const SystemModel& model, double t);

/// Heisenberg-picture transport U(t,t0)^dag P U(t,t0). P must be a projector.
[[nodiscard]] Matrix heisenberg(const SystemModel& model, const Matrix& projector, double t);

}  // namespace histq
