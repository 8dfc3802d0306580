#include "histq/propositions.hpp"

#include <cmath>

#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"

namespace histq {

namespace {

void check_sector(const PropositionSpace& a, const PropositionSpace& b)
{
    if (!(a == b)) throw Error("proposition sector mismatch");
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

}  // namespace

PropositionSpace::PropositionSpace(std::vector<double> support, std::size_t dim_single)
    : support_(std::move(support)), dim_single_(dim_single), op_dim_(int_pow(dim_single, support_.size()))
{
    if (dim_single_ == 0) throw Error("single-time dimension must be positive");
    for (std::size_t i = 1; i < support_.size(); ++i)
        if (!(support_[i] > support_[i - 1])) throw Error("support is not strictly increasing");
}

Proposition Proposition::from(const HistoryOperator& b)
{
    PropositionSpace space(b.support, b.dim_single);
    if (b.op.rows() != static_cast<Eigen::Index>(space.op_dim()) || b.op.cols() != b.op.rows())
        throw Error("history operator dimension does not match its support");
    return Proposition{std::move(space), b.op};
}

Proposition Proposition::unit(const PropositionSpace& space)
{
    const auto d = static_cast<Eigen::Index>(space.op_dim());
    return Proposition{space, Matrix::Identity(d, d)};
}

HistoryOperator Proposition::as_history() const { return make_history_operator(space.support(), op, space.dim_single()); }

complex hs_inner(const Proposition& x, const Proposition& y)
{
    check_sector(x.space, y.space);
    return (x.op.adjoint() * y.op).trace() / static_cast<double>(x.space.op_dim());
}

double p_norm(const Proposition& b, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("p-norm requires p >= 1");
    const Eigen::JacobiSVD<Matrix> svd(b.op);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) acc += std::pow(svd.singularValues()(i), p);
    return std::pow(acc / static_cast<double>(b.space.op_dim()), 1.0 / p);
}

WrightOperator::WrightOperator(PropositionSpace space, Matrix superop)
    : space_(std::move(space)), superop_(std::move(superop))
{
    const auto n = static_cast<Eigen::Index>(space_.sector_dim());
    if (superop_.rows() != n || superop_.cols() != n) throw Error("Wright superoperator dimension mismatch");
}

Proposition WrightOperator::apply(const Proposition& b) const
{
    check_sector(space_, b.space);
    const auto d = static_cast<Eigen::Index>(space_.op_dim());
    return Proposition{space_, unvec(superop_ * vec(b.op), d)};
}

complex WrightOperator::form(const Proposition& x, const Proposition& y) const
{
    check_sector(space_, x.space);
    check_sector(space_, y.space);
    return vec(x.op).dot(superop_ * vec(y.op)) / static_cast<double>(space_.op_dim());
}

WrightOperator wright_construct(const DecoherenceState& ds, std::span<const double> support)
{
    const std::size_t dim = ds.model.dim();
    if (int_pow(dim, 2 * support.size()) > kSectorCap) throw Error("support too large for Wright construction");
    for (double t : support)
        if (!ds.grid.contains(t)) throw Error("support time is not on the time grid");
    PropositionSpace space(std::vector<double>(support.begin(), support.end()), dim);
    const auto big = static_cast<Eigen::Index>(space.op_dim());
    const auto small = static_cast<Eigen::Index>(dim);

    // Columns: vec(pi(E_rc)) for each matrix unit E_rc, column-major index r + c * big.
    Matrix pi(small * small, big * big);
    for (Eigen::Index c = 0; c < big; ++c)
        for (Eigen::Index r = 0; r < big; ++r) {
            Matrix unit = Matrix::Zero(big, big);
            unit(r, c) = 1.0;
            pi.col(r + c * big) = vec(pi_map(unit, dim, support.size()));
        }
    // vec(rho X) = (I (x) rho) vec(X) in column-major order.
    const Matrix left_rho = kron(Matrix::Identity(small, small), ds.model.rho());
    Matrix superop = static_cast<double>(big) * (pi.adjoint() * left_rho * pi);
    return WrightOperator(std::move(space), std::move(superop));
}

double probability(const WrightOperator& t, const Proposition& x)
{
    const complex value = t.form(x, x);
    if (std::abs(value.imag()) > numeric_policy().imaginary) throw Error("non-real quadratic form");
    return value.real();
}

}  // namespace histq
