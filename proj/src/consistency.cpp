#include "histq/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"
#include "histq/set_partitions.hpp"

namespace histq {

Window Window::from_ops(PropositionSpace space, const std::vector<Matrix>& ops, std::string id)
{
    Window w{std::move(id), std::move(space), {}, {}};
    for (const auto& op : ops) {
        if (op.rows() != static_cast<Eigen::Index>(w.space.op_dim()) || op.cols() != op.rows())
            throw Error("window member dimension does not match its sector");
        w.members.push_back(Proposition{w.space, op});
    }
    return w;
}

std::string to_string(Condition c)
{
    switch (c) {
    case Condition::orthogonality: return "orthogonality";
    case Condition::completeness: return "completeness";
    case Condition::positivity: return "positivity";
    case Condition::additivity: return "additivity";
    case Condition::re_cross_term: return "re-cross-term";
    }
    return "unknown";
}

std::string to_string(Verdict v) { return v == Verdict::consistent ? "consistent" : "inconsistent"; }

namespace {

void check_members(const Window& w)
{
    if (w.members.empty()) throw Error("empty window");
    for (const auto& m : w.members)
        if (!(m.space == w.space)) throw Error("proposition sector mismatch");
}

void flag(ConsistencyReport& r, Condition c)
{
    if (std::find(r.violated.begin(), r.violated.end(), c) == r.violated.end()) r.violated.push_back(c);
}

void finish(ConsistencyReport& r)
{
    r.verdict = r.violated.empty() ? Verdict::consistent : Verdict::inconsistent;
}

double completeness_residual(const Window& w)
{
    Matrix total = -Proposition::unit(w.space).op;
    for (const auto& m : w.members) total += m.op;
    return max_abs(total);
}

}  // namespace

ConsistencyReport check_k(const Window& w, const WrightOperator& t, Additivity mode)
{
    check_members(w);
    if (!(w.space == t.space())) throw Error("proposition sector mismatch");
    const auto& tol = numeric_policy();
    ConsistencyReport r;

    for (std::size_t i = 0; i < w.members.size(); ++i)
        for (std::size_t j = i + 1; j < w.members.size(); ++j) {
            const double res = std::abs(hs_inner(w.members[i], w.members[j]));
            r.max_residual = std::max(r.max_residual, res);
            if (res > tol.residual) flag(r, Condition::orthogonality);
        }

    const double comp = completeness_residual(w);
    r.max_residual = std::max(r.max_residual, comp);
    if (comp > tol.residual) flag(r, Condition::completeness);

    double sum = 0.0;
    for (const auto& m : w.members) {
        const double p = probability(t, m);
        r.probabilities.push_back(p);
        sum += p;
        if (!(p > tol.positivity)) flag(r, Condition::positivity);
        if (p > 1.0) {
            r.max_residual = std::max(r.max_residual, p - 1.0);
            if (p - 1.0 > tol.residual) flag(r, Condition::positivity);
        }
    }
    r.max_residual = std::max(r.max_residual, std::abs(sum - 1.0));
    if (std::abs(sum - 1.0) > tol.residual) flag(r, Condition::additivity);
    if (mode == Additivity::boolean_algebra)
        // p_T(x_i + x_j) - p_T(x_i) - p_T(x_j) = 2 Re <x_i, T x_j>
        for (std::size_t i = 0; i < w.members.size(); ++i)
            for (std::size_t j = i + 1; j < w.members.size(); ++j) {
                const double res = 2.0 * std::abs(t.form(w.members[i], w.members[j]).real());
                r.max_residual = std::max(r.max_residual, res);
                if (res > tol.residual) flag(r, Condition::additivity);
            }

    finish(r);
    return r;
}

ConsistencyReport check_op(const DecoherenceState& ds, const Window& w)
{
    check_members(w);
    const auto& tol = numeric_policy();
    std::vector<HistoryOperator> ops;
    for (const auto& m : w.members) {
        if (!is_projector(m.op)) throw Error("window member is not a projector");
        ops.push_back(m.as_history());
    }
    ConsistencyReport r;
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            const double orth = max_abs(ops[i].op * ops[j].op);
            r.max_residual = std::max(r.max_residual, orth);
            if (orth > tol.residual) flag(r, Condition::orthogonality);
            const double cross = std::abs(D_eval(ds, ops[i], ops[j]).real());
            r.max_residual = std::max(r.max_residual, cross);
            if (cross > tol.residual) flag(r, Condition::re_cross_term);
        }
    const double comp = completeness_residual(w);
    r.max_residual = std::max(r.max_residual, comp);
    if (comp > tol.residual) flag(r, Condition::completeness);
    for (const auto& op : ops) r.probabilities.push_back(D_eval(ds, op, op).real());
    finish(r);
    return r;
}

namespace {

bool block_sums_match(const Window& coarse, const Window& fine, const std::vector<std::size_t>& owner)
{
    const double tol = numeric_policy().residual;
    std::vector<Matrix> sums(coarse.members.size(),
                             Matrix::Zero(coarse.members.front().op.rows(), coarse.members.front().op.cols()));
    std::vector<bool> used(coarse.members.size(), false);
    for (std::size_t j = 0; j < fine.members.size(); ++j) {
        sums[owner[j]] += fine.members[j].op;
        used[owner[j]] = true;
    }
    for (std::size_t i = 0; i < coarse.members.size(); ++i) {
        if (!used[i] && max_abs(coarse.members[i].op) > tol) return false;
        if (max_abs(sums[i] - coarse.members[i].op) > tol) return false;
    }
    return true;
}

bool assign_recursive(const Window& coarse, const Window& fine, std::vector<std::size_t>& owner, std::size_t j)
{
    if (j == fine.members.size()) return block_sums_match(coarse, fine, owner);
    for (std::size_t i = 0; i < coarse.members.size(); ++i) {
        owner[j] = i;
        if (assign_recursive(coarse, fine, owner, j + 1)) return true;
    }
    return false;
}

}  // namespace

bool refine_check(const Window& coarse, const Window& fine)
{
    if (coarse.members.empty() || fine.members.empty()) return false;
    if (!(coarse.space == fine.space)) throw Error("proposition sector mismatch");
    const double tol = numeric_policy().residual;

    bool orthogonal = true;
    for (std::size_t i = 0; i < fine.members.size() && orthogonal; ++i)
        for (std::size_t j = i + 1; j < fine.members.size(); ++j)
            if (std::abs(hs_inner(fine.members[i], fine.members[j])) > tol) {
                orthogonal = false;
                break;
            }

    std::vector<std::size_t> owner(fine.members.size(), 0);
    if (orthogonal) {
        // For an orthogonal fine window, y lies in the block of x iff <x, y> = <y, y>.
        for (std::size_t j = 0; j < fine.members.size(); ++j) {
            const complex self = hs_inner(fine.members[j], fine.members[j]);
            std::size_t best = 0;
            double best_gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < coarse.members.size(); ++i) {
                const double gap = std::abs(hs_inner(coarse.members[i], fine.members[j]) - self);
                if (gap < best_gap) {
                    best_gap = gap;
                    best = i;
                }
            }
            owner[j] = best;
        }
        return block_sums_match(coarse, fine, owner);
    }
    if (fine.members.size() > 10) throw Error("refinement check on a non-orthogonal window is limited to 10 members");
    return assign_recursive(coarse, fine, owner, 0);
}

bool is_maximally_refined(const Window& w, const std::vector<Window>& candidates)
{
    for (const auto& c : candidates)
        if (c.members.size() > w.members.size() && c.space == w.space && refine_check(w, c)) return false;
    return true;
}

std::vector<long long> canonical_key(const Matrix& op)
{
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(2 * op.size()));
    for (Eigen::Index c = 0; c < op.cols(); ++c)
        for (Eigen::Index r = 0; r < op.rows(); ++r) {
            key.push_back(std::llround(op(r, c).real() * 1e8));
            key.push_back(std::llround(op(r, c).imag() * 1e8));
        }
    return key;
}

std::vector<Proposition> product_family(const DecoherenceState& ds, const PropositionSpace& space,
                                        const std::vector<Pvm>& per_time)
{
    const auto& support = space.support();
    if (per_time.size() != support.size()) throw Error("one PVM per support time is required");
    const auto d = static_cast<Eigen::Index>(ds.model.dim());
    const double tol = numeric_policy().projector;

    std::vector<Pvm> pvms;
    std::size_t count = 1;
    for (const auto& pvm : per_time) {
        Pvm effective = pvm.empty() ? Pvm{Matrix::Identity(d, d)} : pvm;
        Matrix total = -Matrix::Identity(d, d);
        for (std::size_t i = 0; i < effective.size(); ++i) {
            if (effective[i].rows() != d || !is_projector(effective[i])) throw Error("PVM element is not a projector");
            for (std::size_t j = i + 1; j < effective.size(); ++j)
                if (max_abs(effective[i] * effective[j]) > tol) throw Error("PVM elements are not orthogonal");
            total += effective[i];
        }
        if (max_abs(total) > tol) throw Error("PVM elements do not sum to the identity");
        count *= effective.size();
        if (count > kFamilyCap)
            throw Error("base family exceeds the cap of " + std::to_string(kFamilyCap) + " product histories");
        pvms.push_back(std::move(effective));
    }

    std::vector<Proposition> family;
    std::vector<std::size_t> digit(pvms.size(), 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = pvms.size(); k-- > 0;) {
            digit[k] = rem % pvms[k].size();
            rem /= pvms[k].size();
        }
        HomogeneousHistory h;
        for (std::size_t k = 0; k < pvms.size(); ++k) h.set(support[k], pvms[k][digit[k]]);
        family.push_back(Proposition::from(embed(ds.model, h, support)));
    }
    return family;
}

std::vector<Proposition> coarse_grain(const std::vector<Proposition>& family, const std::vector<std::size_t>& rgs)
{
    if (rgs.size() != family.size()) throw Error("partition size does not match the family");
    std::vector<Proposition> out;
    for (const auto& block : blocks_of(rgs)) {
        Proposition sum{family[block.front()].space, family[block.front()].op};
        for (std::size_t k = 1; k < block.size(); ++k) sum.op += family[block[k]].op;
        out.push_back(std::move(sum));
    }
    return out;
}

namespace {

using WindowKey = std::vector<std::vector<long long>>;

WindowKey window_key(const std::vector<Proposition>& members)
{
    WindowKey key;
    for (const auto& m : members) key.push_back(canonical_key(m.op));
    std::sort(key.begin(), key.end());
    return key;
}

struct Candidate {
    WindowKey key;
    std::vector<Proposition> members;
    ConsistencyReport k_report;
    std::optional<ConsistencyReport> op_report;
};

}  // namespace

SearchResult search_windows(const DecoherenceState& ds, const WrightOperator& t, const PvmChoices& base_pvms,
                            const SearchOptions& options)
{
    const auto& space = t.space();
    const auto& tol = numeric_policy();
    PvmChoices choices = base_pvms;
    if (choices.empty()) choices.resize(space.support().size());
    if (choices.size() != space.support().size()) throw Error("one PVM list per support time is required");
    for (auto& alts : choices)
        if (alts.empty()) alts.push_back(Pvm{});

    SearchResult result;
    std::map<WindowKey, Candidate> found;

    std::vector<std::size_t> pick(choices.size(), 0);
    bool more_choices = true;
    while (more_choices && !result.budget_exhausted) {
        std::vector<Pvm> per_time;
        for (std::size_t k = 0; k < choices.size(); ++k) per_time.push_back(choices[k][pick[k]]);
        const auto family = product_family(ds, space, per_time);
        const std::size_t m = family.size();

        // Gram matrices of the family under <.,T.> and <.,.>; block sums give
        // member probabilities and overlaps without rebuilding operators.
        Matrix gram_t(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        Matrix gram_hs(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                gram_t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.form(family[i], family[j]);
                gram_hs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hs_inner(family[i], family[j]);
            }

        SetPartitions partitions(m);
        do {
            if (result.partitions_examined >= options.budget) {
                result.budget_exhausted = true;
                break;
            }
            ++result.partitions_examined;
            const auto& rgs = partitions.current();
            const std::size_t nb = partitions.block_count();
            std::vector<complex> block_t(nb * nb, 0.0), block_hs(nb * nb, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    const auto ii = static_cast<Eigen::Index>(i);
                    const auto jj = static_cast<Eigen::Index>(j);
                    block_t[rgs[i] * nb + rgs[j]] += gram_t(ii, jj);
                    block_hs[rgs[i] * nb + rgs[j]] += gram_hs(ii, jj);
                }
            bool ok = true;
            double sum = 0.0;
            for (std::size_t a = 0; a < nb && ok; ++a) {
                const double p = block_t[a * nb + a].real();
                sum += p;
                if (!(p > tol.positivity) || p - 1.0 > tol.residual) ok = false;
                for (std::size_t b = a + 1; b < nb && ok; ++b) {
                    if (std::abs(block_hs[a * nb + b]) > tol.residual) ok = false;
                    if (options.additivity == Additivity::boolean_algebra &&
                        2.0 * std::abs(block_t[a * nb + b].real()) > tol.residual)
                        ok = false;
                }
            }
            if (!ok || std::abs(sum - 1.0) > tol.residual) continue;

            auto members = coarse_grain(family, rgs);
            auto key = window_key(members);
            if (found.count(key)) continue;
            Window w{{}, space, members, {}};
            auto k_report = check_k(w, t, options.additivity);
            if (!k_report.consistent()) continue;
            std::optional<ConsistencyReport> op_report;
            if (std::all_of(members.begin(), members.end(), [](const auto& x) { return is_projector(x.op); }))
                op_report = check_op(ds, w);
            found.emplace(key, Candidate{key, std::move(members), std::move(k_report), std::move(op_report)});
        } while (partitions.next());

        // Odometer over PVM alternatives.
        more_choices = false;
        for (std::size_t k = choices.size(); k-- > 0;) {
            if (++pick[k] < choices[k].size()) {
                more_choices = true;
                break;
            }
            pick[k] = 0;
        }
    }

    std::vector<Candidate> ordered;
    for (auto& [key, cand] : found) ordered.push_back(std::move(cand));
    std::stable_sort(ordered.begin(), ordered.end(), [](const Candidate& a, const Candidate& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.key < b.key;
    });

    for (std::size_t i = 0; i < ordered.size(); ++i) {
        auto& cand = ordered[i];
        // Members in canonical order so the output does not depend on the input element order.
        std::sort(cand.members.begin(), cand.members.end(),
                  [](const Proposition& a, const Proposition& b) { return canonical_key(a.op) < canonical_key(b.op); });
        Window w{"w" + std::to_string(i), space, std::move(cand.members), {}};
        auto k_report = check_k(w, t, options.additivity);
        w.probabilities = k_report.probabilities;
        std::optional<ConsistencyReport> op_report;
        if (cand.op_report) op_report = check_op(ds, w);
        result.windows.push_back(std::move(w));
        result.operator_reports.push_back(std::move(op_report));
    }
    return result;
}

}  // namespace histq
