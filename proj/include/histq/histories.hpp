#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "histq/qm_core.hpp"

namespace histq {

/// Time-ordered map time -> single-time projector (Schroedinger picture; transported at embedding).
class HomogeneousHistory {
public:
    HomogeneousHistory() = default;
    HomogeneousHistory(std::initializer_list<std::pair<const double, Matrix>> entries);
    explicit HomogeneousHistory(std::map<double, Matrix> entries);

    void set(double t, Matrix projector);

    [[nodiscard]] const std::map<double, Matrix>& entries() const { return entries_; }
    [[nodiscard]] std::vector<double> times() const;
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }

private:
    std::map<double, Matrix> entries_;
};

/// An operator on the |support|-fold tensor power of the single-time space.
/// The empty support carries a 1x1 operator (multiples of the proposition e).
struct HistoryOperator {
    std::vector<double> support;
    Matrix op;
    std::size_t dim_single = 0;

    [[nodiscard]] std::size_t n_times() const { return support.size(); }
};

/// Checked constructor: support strictly increasing, op dimension (dim_single)^|support|.
[[nodiscard]] HistoryOperator make_history_operator(std::vector<double> support, Matrix op, std::size_t dim_single);

/// Identity on the tensor space over `support`, i.e. the proposition e.
[[nodiscard]] HistoryOperator unit_history(std::size_t dim_single, std::vector<double> support = {});

/// Sorted union of two supports.
[[nodiscard]] std::vector<double> unify_supports(std::span<const double> a, std::span<const double> b);

/// Drops every identity entry, giving the canonical representative.
[[nodiscard]] HomogeneousHistory support_reduce(const HomogeneousHistory& h);

/// Tensor product of the Heisenberg-transported projectors over h's own times.
[[nodiscard]] HistoryOperator embed(const SystemModel& model, const HomogeneousHistory& h);

/// As above but over a superset `support`; missing times contribute identity factors.
[[nodiscard]] HistoryOperator embed(const SystemModel& model, const HomogeneousHistory& h,
                                    std::span<const double> support);

/// Class operator P_{t1}(t1) ... P_{tn}(tn) on the single-time space.
[[nodiscard]] Matrix class_operator(const SystemModel& model, const HomogeneousHistory& h);

/// The linear map pi on a dense operator over n time slots:
/// pi(b_1 (x) ... (x) b_n) = b_1 ... b_n, extended linearly through matrix units.
[[nodiscard]] Matrix pi_map(const Matrix& op, std::size_t dim_single, std::size_t n_times);
[[nodiscard]] Matrix pi_map(const HistoryOperator& b);

struct HistoryTerm {
    complex coefficient;
    HomogeneousHistory history;
};

/// pi on a finite linear combination of homogeneous histories sharing one temporal support.
[[nodiscard]] Matrix pi_extend(const SystemModel& model, std::span<const HistoryTerm> terms);

/// The combination as an explicit operator on the shared support.
[[nodiscard]] HistoryOperator combine(const SystemModel& model, std::span<const HistoryTerm> terms);

}  // namespace histq
