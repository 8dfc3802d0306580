#pragma once

#include <optional>
#include <span>
#include <vector>

#include "histq/histories.hpp"
#include "histq/qm_core.hpp"

namespace histq {

/// The standard decoherence functional of a model over a time grid.
struct DecoherenceState {
    DecoherenceState(SystemModel model, TimeGrid grid);

    SystemModel model;
    TimeGrid grid;
};

/// Operator on (H^{(x)n}) (x) (H^{(x)n}) reproducing the functional as tr((p (x) q) X).
struct IlsOperator {
    std::vector<double> support;
    Matrix xd;
};

/// Largest operator-space dimension (dim H)^{2n} accepted by ILS and Wright constructions.
inline constexpr std::size_t kSectorCap = 81;

/// tr(P_{tn}...P_{t1} rho Q_{t1}...Q_{tn}) with both histories padded to the union of their times.
[[nodiscard]] complex d_eval(const DecoherenceState& ds, const HomogeneousHistory& h, const HomogeneousHistory& k);

/// Sesquilinear extension tr(pi(b1)^dag rho pi(b2)); b1 and b2 must share one support.
[[nodiscard]] complex D_eval(const DecoherenceState& ds, const HistoryOperator& b1, const HistoryOperator& b2);
[[nodiscard]] complex D_eval(const DecoherenceState& ds, std::span<const HistoryTerm> b1,
                             std::span<const HistoryTerm> b2);

/// Auxiliary orthonormal bases e^2 ... e^{2n} of the basis-sum representation, as unitary columns.
/// An empty list selects the rho eigenbasis for every slot.
struct SumBases {
    std::vector<Matrix> aux;
};

/// 2n-fold basis sum with the rho eigenbasis in the first slot.
[[nodiscard]] complex d_sum_eval(const DecoherenceState& ds, const HistoryOperator& p, const HistoryOperator& q,
                                 const SumBases& bases = {});

/// The same sum from raw spectral data; `weights` need not be normalized. Used for truncations.
[[nodiscard]] complex decf_sum(std::span<const double> weights, const Matrix& psi, const Matrix& p,
                               const Matrix& q, std::size_t dim_single, std::size_t n_times,
                               const SumBases& bases = {});

/// Unique X_d with tr((G_a (x) G_b) X_d) = D(G_a, G_b) over a Hermitian operator basis.
[[nodiscard]] IlsOperator ils_construct(const DecoherenceState& ds, std::span<const double> support);

/// tr((p (x) q) X_d).
[[nodiscard]] complex ils_eval(const IlsOperator& ils, const HistoryOperator& p, const HistoryOperator& q);

/// D(p, q) / tr(1) on the support space.
[[nodiscard]] complex density(const DecoherenceState& ds, const HistoryOperator& p, const HistoryOperator& q);

/// Orthonormal (tr(G_a G_b) = delta_ab) Hermitian basis of the d x d matrices.
[[nodiscard]] std::vector<Matrix> hermitian_basis(std::size_t d);

}  // namespace histq
