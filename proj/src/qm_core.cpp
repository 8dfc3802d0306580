#include "histq/qm_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"

namespace histq {

namespace {

NumericPolicy& mutable_policy()
{
    static NumericPolicy policy;
    return policy;
}

}  // namespace

const NumericPolicy& numeric_policy() { return mutable_policy(); }

void set_numeric_policy(const NumericPolicy& policy) { mutable_policy() = policy; }

NumericPolicy parse_policy_overrides(const std::string& spec, NumericPolicy base)
{
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("tolerance override '" + item + "' is not key=value");
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t");
            const auto e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
        };
        const std::string key = trim(item.substr(0, eq));
        const std::string text = trim(item.substr(eq + 1));
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw Error("tolerance override '" + key + "' has malformed value '" + text + "'");
        }
        if (!(value > 0.0) || !std::isfinite(value)) throw Error("tolerance override '" + key + "' must be positive");

        if (key == "equality") base.equality = value;
        else if (key == "hermiticity") base.hermiticity = value;
        else if (key == "unitarity") base.unitarity = value;
        else if (key == "projector") base.projector = value;
        else if (key == "trace_one") base.trace_one = value;
        else if (key == "orthonormality") base.orthonormality = value;
        else if (key == "reconstruction") base.reconstruction = value;
        else if (key == "residual") base.residual = value;
        else if (key == "positivity") base.positivity = value;
        else if (key == "imaginary") base.imaginary = value;
        else throw Error("unknown tolerance key '" + key + "'");
    }
    return base;
}

double max_abs(const Matrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol)
{
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
    return max_abs(a - a.adjoint()) <= tol * scale;
}

bool is_hermitian(const Matrix& a) { return is_hermitian(a, numeric_policy().hermiticity); }

bool is_projector(const Matrix& a, double tol)
{
    if (a.rows() != a.cols()) return false;
    if (max_abs(a - a.adjoint()) > tol) return false;
    return max_abs(a * a - a) <= tol;
}

bool is_projector(const Matrix& a) { return is_projector(a, numeric_policy().projector); }

bool is_unitary(const Matrix& u, double tol)
{
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix tensor_product(std::span<const Matrix> ops)
{
    if (ops.empty()) throw Error("empty tensor factor list");
    for (const auto& op : ops)
        if (op.rows() != op.cols()) throw Error("tensor factor is not square");
    Matrix out = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) out = kron(out, ops[k]);
    return out;
}

Matrix tensor_product(std::initializer_list<Matrix> ops)
{
    return tensor_product(std::span<const Matrix>(ops.begin(), ops.size()));
}

std::size_t int_pow(std::size_t base, std::size_t exp)
{
    std::size_t out = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base)
            throw Error("tensor dimension overflow");
        out *= base;
    }
    return out;
}

SystemModel::SystemModel(Matrix hamiltonian, Matrix rho, double t0)
    : hamiltonian_(std::move(hamiltonian)), rho_(std::move(rho)), t0_(t0)
{
    const auto& tol = numeric_policy();
    if (hamiltonian_.rows() == 0 || hamiltonian_.rows() != hamiltonian_.cols())
        throw Error("hamiltonian must be a non-empty square matrix");
    if (rho_.rows() != hamiltonian_.rows() || rho_.cols() != hamiltonian_.cols())
        throw Error("rho dimension does not match hamiltonian");
    if (!hamiltonian_.allFinite() || !rho_.allFinite()) throw Error("non-finite matrix entries");
    if (!is_hermitian(hamiltonian_)) throw Error("hamiltonian is not Hermitian");
    if (!is_hermitian(rho_)) throw Error("rho is not Hermitian");
    if (std::abs(rho_.trace() - complex(1.0, 0.0)) > tol.trace_one) throw Error("rho trace is not 1");

    // Symmetrize away round-off before diagonalizing.
    const Matrix h_sym = 0.5 * (hamiltonian_ + hamiltonian_.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix> h_eig(h_sym);
    energies_ = h_eig.eigenvalues();
    energy_basis_ = h_eig.eigenvectors();

    const Matrix rho_sym = 0.5 * (rho_ + rho_.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix> r_eig(rho_sym);
    const Eigen::VectorXd w = r_eig.eigenvalues();
    if (w.minCoeff() < -tol.trace_one) throw Error("rho is not positive semidefinite");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(w.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w(a) > w(b); });
    for (auto idx : order)
        spectral_.push_back({std::max(w(idx), 0.0), r_eig.eigenvectors().col(idx)});

    double total = 0.0;
    Matrix rebuilt = Matrix::Zero(rho_.rows(), rho_.cols());
    for (const auto& term : spectral_) {
        total += term.weight;
        rebuilt += term.weight * term.vector * term.vector.adjoint();
    }
    if (std::abs(total - 1.0) > tol.trace_one) throw Error("rho spectral weights do not sum to 1");
    if (max_abs(rebuilt - rho_) > tol.reconstruction) throw Error("rho spectral reconstruction failed");
}

Eigen::VectorXd SystemModel::weights() const
{
    Eigen::VectorXd w(static_cast<Eigen::Index>(spectral_.size()));
    for (std::size_t i = 0; i < spectral_.size(); ++i) w(static_cast<Eigen::Index>(i)) = spectral_[i].weight;
    return w;
}

Matrix SystemModel::eigenbasis() const
{
    Matrix basis(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(spectral_.size()));
    for (std::size_t i = 0; i < spectral_.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = spectral_[i].vector;
    return basis;
}

TimeGrid::TimeGrid(std::vector<double> times, double origin) : times_(std::move(times)), origin_(origin)
{
    if (!std::isfinite(origin_)) throw Error("time grid origin is not finite");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i])) throw Error("time grid contains a non-finite time");
        if (i > 0 && !(times_[i] > times_[i - 1])) throw Error("time grid is not strictly increasing");
    }
}

bool TimeGrid::contains(double t) const
{
    return std::binary_search(times_.begin(), times_.end(), t);
}

Matrix evolve(const SystemModel& model, double t)
{
    const double dt = t - model.t0();
    const auto n = model.energies_.size();
    Vector phases(n);
    for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -model.energies_(k) * dt);
    return model.energy_basis_ * phases.asDiagonal() * model.energy_basis_.adjoint();
}

Matrix heisenberg(const SystemModel& model, const Matrix& projector, double t)
{
    if (projector.rows() != static_cast<Eigen::Index>(model.dim()) || projector.cols() != projector.rows())
        throw Error("projector dimension does not match the model");
    if (!is_projector(projector)) throw Error("operator is not a projector");
    const Matrix u = evolve(model, t);
    return u.adjoint() * projector * u;
}

}  // namespace histq
