#pragma once

#include <span>
#include <vector>

#include "histq/decoherence.hpp"
#include "histq/histories.hpp"

namespace histq {

/// One support sector of the propositions Hilbert space: operators on H^{(x)n}
/// with the normalized Hilbert-Schmidt inner product tr(x^dag y) / tr(1).
class PropositionSpace {
public:
    PropositionSpace(std::vector<double> support, std::size_t dim_single);

    [[nodiscard]] const std::vector<double>& support() const { return support_; }
    [[nodiscard]] std::size_t dim_single() const { return dim_single_; }
    /// (dim H)^n, the size of the operators in this sector.
    [[nodiscard]] std::size_t op_dim() const { return op_dim_; }
    /// (dim H)^{2n}, the dimension of the sector as a vector space.
    [[nodiscard]] std::size_t sector_dim() const { return op_dim_ * op_dim_; }

    friend bool operator==(const PropositionSpace&, const PropositionSpace&) = default;

private:
    std::vector<double> support_;
    std::size_t dim_single_;
    std::size_t op_dim_;
};

struct Proposition {
    PropositionSpace space;
    Matrix op;

    [[nodiscard]] static Proposition from(const HistoryOperator& b);
    [[nodiscard]] static Proposition unit(const PropositionSpace& space);
    [[nodiscard]] HistoryOperator as_history() const;
};

[[nodiscard]] complex hs_inner(const Proposition& x, const Proposition& y);

/// (tr((b^dag b)^{p/2}) / tr(1))^{1/p} from the singular values of b.
[[nodiscard]] double p_norm(const Proposition& b, double p);

/// Wright operator of one sector as a superoperator on column-major vectorized operators.
class WrightOperator {
public:
    WrightOperator(PropositionSpace space, Matrix superop);

    [[nodiscard]] const PropositionSpace& space() const { return space_; }
    [[nodiscard]] const Matrix& superop() const { return superop_; }

    [[nodiscard]] Proposition apply(const Proposition& b) const;
    /// <x, T y>.
    [[nodiscard]] complex form(const Proposition& x, const Proposition& y) const;

private:
    PropositionSpace space_;
    Matrix superop_;
};

/// T = tr(1) pi^* (b -> rho pi(b)), so that <b1, T b2> = D(b1, b2) within the sector.
[[nodiscard]] WrightOperator wright_construct(const DecoherenceState& ds, std::span<const double> support);

/// p_T(x) = <x, T x>; throws if the imaginary part exceeds the policy tolerance.
[[nodiscard]] double probability(const WrightOperator& t, const Proposition& x);

}  // namespace histq
