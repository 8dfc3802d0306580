#include "histq/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "histq/error.hpp"

namespace histq {

DecoherenceState::DecoherenceState(SystemModel model_, TimeGrid grid_)
    : model(std::move(model_)), grid(std::move(grid_))
{
    if (grid.origin() != model.t0()) throw Error("time grid origin differs from the model's t0");
}

namespace {

void check_on_grid(const DecoherenceState& ds, std::span<const double> times)
{
    for (double t : times)
        if (!ds.grid.contains(t)) throw Error("history time is not on the time grid");
}

void check_same_support(const HistoryOperator& a, const HistoryOperator& b)
{
    if (a.support != b.support) throw Error("mixed temporal support");
    if (a.dim_single != b.dim_single) throw Error("history operators over different single-time spaces");
}

// Unitary columns for tensor slot factors, leftmost factor most significant.
Matrix slot_basis(std::span<const Matrix* const> factors)
{
    Matrix out = *factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, *factors[k]);
    return out;
}

}  // namespace

complex d_eval(const DecoherenceState& ds, const HomogeneousHistory& h, const HomogeneousHistory& k)
{
    const auto ht = h.times();
    const auto kt = k.times();
    check_on_grid(ds, ht);
    check_on_grid(ds, kt);
    // Identity padding to the common support leaves the ordered products unchanged.
    const Matrix ch = class_operator(ds.model, h);
    const Matrix ck = class_operator(ds.model, k);
    return (ch.adjoint() * ds.model.rho() * ck).trace();
}

complex D_eval(const DecoherenceState& ds, const HistoryOperator& b1, const HistoryOperator& b2)
{
    check_same_support(b1, b2);
    if (b1.dim_single != ds.model.dim()) throw Error("history operator dimension does not match the model");
    check_on_grid(ds, b1.support);
    return (pi_map(b1).adjoint() * ds.model.rho() * pi_map(b2)).trace();
}

complex D_eval(const DecoherenceState& ds, std::span<const HistoryTerm> b1, std::span<const HistoryTerm> b2)
{
    if (b1.empty() || b2.empty()) throw Error("empty linear combination");
    if (b1.front().history.times() != b2.front().history.times()) throw Error("mixed temporal support");
    check_on_grid(ds, b1.front().history.times());
    const Matrix p1 = pi_extend(ds.model, b1);
    const Matrix p2 = pi_extend(ds.model, b2);
    return (p1.adjoint() * ds.model.rho() * p2).trace();
}

complex decf_sum(std::span<const double> weights, const Matrix& psi, const Matrix& p, const Matrix& q,
                 std::size_t dim_single, std::size_t n_times, const SumBases& bases)
{
    const std::size_t n = n_times;
    const auto d = static_cast<Eigen::Index>(dim_single);
    if (n == 0) {
        double total = 0.0;
        for (double w : weights) total += w;
        return total * p(0, 0) * q(0, 0);
    }
    if (psi.rows() != d || psi.cols() != d) throw Error("psi basis dimension mismatch");
    if (static_cast<Eigen::Index>(weights.size()) != d) throw Error("weight count does not match dimension");
    if (!bases.aux.empty() && bases.aux.size() != 2 * n - 1)
        throw Error("basis-sum representation needs 2n-1 auxiliary bases");

    // slot[k] is the basis e^k for k = 2..2n; slot 1 is psi.
    std::vector<const Matrix*> slot(2 * n + 1, &psi);
    if (!bases.aux.empty())
        for (std::size_t k = 2; k <= 2 * n; ++k) slot[k] = &bases.aux[k - 2];

    // Factor bases for rows/columns of p and q (see the index layout below).
    std::vector<const Matrix*> p_rows, p_cols, q_rows, q_cols;
    for (std::size_t k = 2 * n; k >= n + 1; --k) p_rows.push_back(slot[k]);
    p_cols.push_back(slot[1]);
    for (std::size_t k = 2 * n; k >= n + 2; --k) p_cols.push_back(slot[k]);
    q_rows.push_back(slot[1]);
    for (std::size_t k = 2; k <= n; ++k) q_rows.push_back(slot[k]);
    for (std::size_t k = 2; k <= n + 1; ++k) q_cols.push_back(slot[k]);

    const Matrix pt = slot_basis(p_rows).adjoint() * p * slot_basis(p_cols);
    const Matrix qt = slot_basis(q_rows).adjoint() * q * slot_basis(q_cols);

    // j[1..2n]; p row (j_2n, ..., j_{n+1}), p col (j_1, j_2n, ..., j_{n+2}),
    // q row (j_1, j_2, ..., j_n), q col (j_2, ..., j_{n+1}).
    std::vector<Eigen::Index> j(2 * n + 1, 0);
    const std::size_t total = int_pow(dim_single, 2 * n);
    complex acc = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = 2 * n; k >= 1; --k) {
            j[k] = static_cast<Eigen::Index>(rem % dim_single);
            rem /= dim_single;
        }
        const double w = weights[static_cast<std::size_t>(j[1])];
        if (w == 0.0) continue;

        Eigen::Index pr = 0, pc = j[1], qr = j[1], qc = 0;
        for (std::size_t k = 2 * n; k >= n + 1; --k) pr = pr * d + j[k];
        for (std::size_t k = 2 * n; k >= n + 2; --k) pc = pc * d + j[k];
        for (std::size_t k = 2; k <= n; ++k) qr = qr * d + j[k];
        for (std::size_t k = 2; k <= n + 1; ++k) qc = qc * d + j[k];
        acc += w * pt(pr, pc) * qt(qr, qc);
    }
    return acc;
}

complex d_sum_eval(const DecoherenceState& ds, const HistoryOperator& p, const HistoryOperator& q,
                   const SumBases& bases)
{
    check_same_support(p, q);
    if (p.dim_single != ds.model.dim()) throw Error("history operator dimension does not match the model");
    check_on_grid(ds, p.support);
    const Eigen::VectorXd w = ds.model.weights();
    const std::vector<double> weights(w.data(), w.data() + w.size());
    return decf_sum(weights, ds.model.eigenbasis(), p.op, q.op, p.dim_single, p.n_times(), bases);
}

std::vector<Matrix> hermitian_basis(std::size_t d)
{
    const auto n = static_cast<Eigen::Index>(d);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Matrix> out;
    out.reserve(d * d);
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix g = Matrix::Zero(n, n);
        g(i, i) = 1.0;
        out.push_back(std::move(g));
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k < n; ++k) {
            Matrix re = Matrix::Zero(n, n);
            re(i, k) = s;
            re(k, i) = s;
            out.push_back(std::move(re));
            Matrix im = Matrix::Zero(n, n);
            im(i, k) = complex(0.0, s);
            im(k, i) = complex(0.0, -s);
            out.push_back(std::move(im));
        }
    return out;
}

IlsOperator ils_construct(const DecoherenceState& ds, std::span<const double> support)
{
    const std::size_t dim = ds.model.dim();
    if (int_pow(dim, 2 * support.size()) > kSectorCap) throw Error("support too large for ILS reconstruction");
    check_on_grid(ds, support);
    std::vector<double> sup(support.begin(), support.end());
    const std::size_t n = sup.size();
    const std::size_t big = int_pow(dim, n);

    const auto basis = hermitian_basis(big);
    std::vector<Matrix> images;
    images.reserve(basis.size());
    for (const auto& g : basis) images.push_back(pi_map(g, dim, n));

    // Dual-basis solution: X = sum_{a,b} D(G_a, G_b) G_a (x) G_b.
    const auto bb = static_cast<Eigen::Index>(big);
    Matrix xd = Matrix::Zero(bb * bb, bb * bb);
    const Matrix& rho = ds.model.rho();
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const Matrix left = images[a].adjoint() * rho;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const complex coeff = (left * images[b]).trace();
            if (coeff == complex(0.0, 0.0)) continue;
            // G_a (x) G_b is sparse: at most 2 nonzeros per factor.
            for (Eigen::Index i = 0; i < bb; ++i)
                for (Eigen::Index k = 0; k < bb; ++k) {
                    const complex ga = basis[a](i, k);
                    if (ga == complex(0.0, 0.0)) continue;
                    for (Eigen::Index r = 0; r < bb; ++r)
                        for (Eigen::Index c = 0; c < bb; ++c) {
                            const complex gb = basis[b](r, c);
                            if (gb == complex(0.0, 0.0)) continue;
                            xd(i * bb + r, k * bb + c) += coeff * ga * gb;
                        }
                }
        }
    }
    return IlsOperator{std::move(sup), std::move(xd)};
}

complex ils_eval(const IlsOperator& ils, const HistoryOperator& p, const HistoryOperator& q)
{
    if (p.support != ils.support || q.support != ils.support) throw Error("mixed temporal support");
    const Matrix pq = kron(p.op, q.op);
    if (pq.rows() != ils.xd.rows()) throw Error("operator dimension does not match ILS operator");
    // tr(A X) without forming the product.
    return (pq.transpose().cwiseProduct(ils.xd)).sum();
}

complex density(const DecoherenceState& ds, const HistoryOperator& p, const HistoryOperator& q)
{
    const double unit_trace = static_cast<double>(int_pow(p.dim_single, p.n_times()));
    return D_eval(ds, p, q) / unit_trace;
}

}  // namespace histq
