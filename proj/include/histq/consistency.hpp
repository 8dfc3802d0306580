#pragma once

#include <optional>
#include <string>
#include <vector>

#include "histq/decoherence.hpp"
#include "histq/propositions.hpp"

namespace histq {

/// A finite family of propositions from one sector, with probabilities filled by a check.
struct Window {
    std::string id;
    PropositionSpace space;
    std::vector<Proposition> members;
    std::vector<double> probabilities;

    [[nodiscard]] static Window from_ops(PropositionSpace space, const std::vector<Matrix>& ops, std::string id = {});
};

enum class Verdict { consistent, inconsistent };

enum class Condition { orthogonality, completeness, positivity, additivity, re_cross_term };

[[nodiscard]] std::string to_string(Condition c);
[[nodiscard]] std::string to_string(Verdict v);

struct ConsistencyReport {
    Verdict verdict = Verdict::inconsistent;
    std::vector<Condition> violated;
    double max_residual = 0.0;
    std::vector<double> probabilities;

    [[nodiscard]] bool consistent() const { return verdict == Verdict::consistent; }
};

/// Reading of the additivity condition.
/// boolean_algebra: p_T adds over every sub-sum of members, i.e. Re <x_i, T x_j> = 0 for i != j
/// (and hence the probabilities sum to 1). total: only the probabilities summing to 1.
enum class Additivity { boolean_algebra, total };

/// Conditions in the propositions space: pairwise orthogonal, sum to e,
/// 0 < p_T(x_i) <= 1, and additivity in the chosen reading.
[[nodiscard]] ConsistencyReport check_k(const Window& w, const WrightOperator& t,
                                        Additivity mode = Additivity::boolean_algebra);

/// Operator picture: mutually orthogonal projectors summing to 1 with Re D(p, q) = 0 for p != q.
[[nodiscard]] ConsistencyReport check_op(const DecoherenceState& ds, const Window& w);

/// True iff each member of `coarse` is the sum of a block of `fine`, the blocks partitioning `fine`.
[[nodiscard]] bool refine_check(const Window& coarse, const Window& fine);

/// True iff no candidate is a strict refinement of w.
[[nodiscard]] bool is_maximally_refined(const Window& w, const std::vector<Window>& candidates);

/// A projection-valued measure on the single-time space.
using Pvm = std::vector<Matrix>;

/// Alternatives per support time; an empty list means the trivial PVM {1}.
using PvmChoices = std::vector<std::vector<Pvm>>;

inline constexpr std::size_t kFamilyCap = 12;

/// Product histories for one choice of PVM per time, in odometer order of the elements.
[[nodiscard]] std::vector<Proposition> product_family(const DecoherenceState& ds, const PropositionSpace& space,
                                                      const std::vector<Pvm>& per_time);

/// Members obtained by summing the family over the blocks of a restricted growth string.
[[nodiscard]] std::vector<Proposition> coarse_grain(const std::vector<Proposition>& family,
                                                    const std::vector<std::size_t>& rgs);

struct SearchOptions {
    std::size_t budget = 5'000'000;  // partitions examined, summed over all PVM choices
    Additivity additivity = Additivity::boolean_algebra;
};

struct SearchResult {
    std::vector<Window> windows;                      // consistent in the propositions space
    std::vector<std::optional<ConsistencyReport>> operator_reports;  // parallel to windows
    std::size_t partitions_examined = 0;
    bool budget_exhausted = false;
};

/// Coarse-grainings of PVM product families that pass check_k, deduplicated and
/// ordered by member count (descending) then by a canonical operator key.
[[nodiscard]] SearchResult search_windows(const DecoherenceState& ds, const WrightOperator& t,
                                          const PvmChoices& base_pvms, const SearchOptions& options = {});

/// Lexicographic key of an operator on a 1e-8 grid; used for canonical ordering.
[[nodiscard]] std::vector<long long> canonical_key(const Matrix& op);

}  // namespace histq
