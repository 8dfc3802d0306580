#include "histq/histories.hpp"

#include <algorithm>

#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"

namespace histq {

HomogeneousHistory::HomogeneousHistory(std::initializer_list<std::pair<const double, Matrix>> entries)
{
    for (const auto& [t, p] : entries) set(t, p);
}

HomogeneousHistory::HomogeneousHistory(std::map<double, Matrix> entries)
{
    for (auto& [t, p] : entries) set(t, std::move(p));
}

void HomogeneousHistory::set(double t, Matrix projector)
{
    if (!std::isfinite(t)) throw Error("history time is not finite");
    if (!is_projector(projector)) throw Error("history entry is not a projector");
    if (!entries_.empty() && entries_.begin()->second.rows() != projector.rows())
        throw Error("history entries have different dimensions");
    entries_[t] = std::move(projector);
}

std::vector<double> HomogeneousHistory::times() const
{
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& entry : entries_) out.push_back(entry.first);
    return out;
}

HistoryOperator make_history_operator(std::vector<double> support, Matrix op, std::size_t dim_single)
{
    if (dim_single == 0) throw Error("single-time dimension must be positive");
    for (std::size_t i = 1; i < support.size(); ++i)
        if (!(support[i] > support[i - 1])) throw Error("support is not strictly increasing");
    const auto d = static_cast<Eigen::Index>(int_pow(dim_single, support.size()));
    if (op.rows() != d || op.cols() != d) throw Error("history operator dimension does not match its support");
    return HistoryOperator{std::move(support), std::move(op), dim_single};
}

HistoryOperator unit_history(std::size_t dim_single, std::vector<double> support)
{
    const auto d = static_cast<Eigen::Index>(int_pow(dim_single, support.size()));
    return make_history_operator(std::move(support), Matrix::Identity(d, d), dim_single);
}

std::vector<double> unify_supports(std::span<const double> a, std::span<const double> b)
{
    std::vector<double> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

HomogeneousHistory support_reduce(const HomogeneousHistory& h)
{
    const double tol = numeric_policy().equality;
    HomogeneousHistory out;
    for (const auto& [t, p] : h.entries()) {
        const Matrix id = Matrix::Identity(p.rows(), p.cols());
        if (max_abs(p - id) > tol) out.set(t, p);
    }
    return out;
}

namespace {

void check_dim(const SystemModel& model, const HomogeneousHistory& h)
{
    if (!h.empty() && h.entries().begin()->second.rows() != static_cast<Eigen::Index>(model.dim()))
        throw Error("history dimension does not match the model");
}

}  // namespace

HistoryOperator embed(const SystemModel& model, const HomogeneousHistory& h)
{
    const auto times = h.times();
    return embed(model, h, times);
}

HistoryOperator embed(const SystemModel& model, const HomogeneousHistory& h, std::span<const double> support)
{
    check_dim(model, h);
    const auto d = static_cast<Eigen::Index>(model.dim());
    for (double t : h.times())
        if (!std::binary_search(support.begin(), support.end(), t))
            throw Error("history time lies outside the embedding support");

    std::vector<double> sup(support.begin(), support.end());
    if (sup.empty()) return unit_history(model.dim());

    std::vector<Matrix> factors;
    factors.reserve(sup.size());
    for (double t : sup) {
        const auto it = h.entries().find(t);
        if (it == h.entries().end()) factors.push_back(Matrix::Identity(d, d));
        else factors.push_back(heisenberg(model, it->second, t));
    }
    return make_history_operator(std::move(sup), tensor_product(factors), model.dim());
}

Matrix class_operator(const SystemModel& model, const HomogeneousHistory& h)
{
    check_dim(model, h);
    const auto d = static_cast<Eigen::Index>(model.dim());
    Matrix out = Matrix::Identity(d, d);
    for (const auto& [t, p] : h.entries()) out = out * heisenberg(model, p, t);
    return out;
}

Matrix pi_map(const Matrix& op, std::size_t dim_single, std::size_t n_times)
{
    const auto d = static_cast<Eigen::Index>(dim_single);
    if (n_times == 0) {
        if (op.rows() != 1 || op.cols() != 1) throw Error("empty-support operator must be 1x1");
        return op(0, 0) * Matrix::Identity(d, d);
    }
    // Row multi-index (a, k_2..k_n), column multi-index (k_2..k_n, c): adjacent
    // matrix units contract, leaving |a><c| weighted by the entry.
    const auto inner = static_cast<Eigen::Index>(int_pow(dim_single, n_times - 1));
    if (op.rows() != d * inner || op.cols() != d * inner) throw Error("operator dimension does not match support");
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index c = 0; c < d; ++c) {
            complex acc = 0.0;
            for (Eigen::Index k = 0; k < inner; ++k) acc += op(a * inner + k, k * d + c);
            out(a, c) = acc;
        }
    return out;
}

Matrix pi_map(const HistoryOperator& b) { return pi_map(b.op, b.dim_single, b.n_times()); }

namespace {

void check_common_support(std::span<const HistoryTerm> terms)
{
    if (terms.empty()) throw Error("empty linear combination");
    const auto times = terms.front().history.times();
    for (const auto& term : terms)
        if (term.history.times() != times) throw Error("mixed temporal support");
}

}  // namespace

Matrix pi_extend(const SystemModel& model, std::span<const HistoryTerm> terms)
{
    check_common_support(terms);
    const auto d = static_cast<Eigen::Index>(model.dim());
    Matrix out = Matrix::Zero(d, d);
    for (const auto& term : terms) out += term.coefficient * class_operator(model, term.history);
    return out;
}

HistoryOperator combine(const SystemModel& model, std::span<const HistoryTerm> terms)
{
    check_common_support(terms);
    HistoryOperator out = embed(model, terms.front().history);
    out.op *= terms.front().coefficient;
    for (std::size_t k = 1; k < terms.size(); ++k) out.op += terms[k].coefficient * embed(model, terms[k].history).op;
    return out;
}

}  // namespace histq
