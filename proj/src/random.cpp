#include "histq/random.hpp"

#include <cmath>
#include <numbers>

namespace histq {

Matrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(r, c) = complex(re, im);
        }
    return m;
}

Matrix random_unitary(Rng& rng, std::size_t d)
{
    const Eigen::HouseholderQR<Matrix> qr(random_ginibre(rng, d, d));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    // Phase fix so the distribution is Haar.
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const complex diag = r(k, k);
        if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
    }
    return q;
}

Matrix random_hermitian(Rng& rng, std::size_t d, double scale)
{
    const Matrix g = random_ginibre(rng, d, d);
    Matrix h = 0.5 * scale * (g + g.adjoint());
    return 0.5 * (h + h.adjoint());
}

Matrix random_density(Rng& rng, std::size_t d)
{
    const Matrix g = random_ginibre(rng, d, d);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Matrix random_projector(Rng& rng, std::size_t d, std::size_t rank)
{
    const Matrix u = random_unitary(rng, d);
    const Matrix v = u.leftCols(static_cast<Eigen::Index>(rank));
    Matrix p = v * v.adjoint();
    return 0.5 * (p + p.adjoint());
}

Matrix random_projector(Rng& rng, std::size_t d)
{
    std::uniform_int_distribution<std::size_t> pick(0, d);
    return random_projector(rng, d, pick(rng));
}

Pvm random_basis_pvm(Rng& rng, std::size_t d)
{
    const Matrix u = random_unitary(rng, d);
    Pvm out;
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        Matrix p = u.col(k) * u.col(k).adjoint();
        out.push_back(0.5 * (p + p.adjoint()));
    }
    return out;
}

HomogeneousHistory random_history(Rng& rng, std::size_t d, const std::vector<double>& times)
{
    HomogeneousHistory h;
    for (double t : times) h.set(t, random_projector(rng, d));
    return h;
}

DecoherenceState random_state(Rng& rng, std::size_t d, std::size_t n_times)
{
    std::vector<double> times;
    for (std::size_t k = 1; k <= n_times; ++k) times.push_back(static_cast<double>(k));
    return DecoherenceState(SystemModel(random_hermitian(rng, d), random_density(rng, d), 0.0), TimeGrid(times, 0.0));
}

Pvm computational_pvm(std::size_t d)
{
    Pvm out;
    const auto n = static_cast<Eigen::Index>(d);
    for (Eigen::Index k = 0; k < n; ++k) {
        Matrix p = Matrix::Zero(n, n);
        p(k, k) = 1.0;
        out.push_back(std::move(p));
    }
    return out;
}

Pvm hadamard_pvm(std::size_t d)
{
    Pvm out;
    const auto n = static_cast<Eigen::Index>(d);
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector v(n);
        for (Eigen::Index j = 0; j < n; ++j)
            v(j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                              2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d));
        Matrix p = v * v.adjoint();
        // Exact zeros/halves where the phases are real.
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) {
                if (std::abs(p(r, c).imag()) < 1e-15) p(r, c).imag(0.0);
                if (std::abs(p(r, c).real()) < 1e-15) p(r, c).real(0.0);
            }
        out.push_back(0.5 * (p + p.adjoint()));
    }
    return out;
}

}  // namespace histq
