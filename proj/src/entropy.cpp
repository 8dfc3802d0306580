#include "histq/entropy.hpp"

#include <cmath>
#include <limits>

#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"

namespace histq {

namespace {

EntropyReport assemble(std::string id, double p, const std::vector<double>& probs, const std::vector<double>& norms)
{
    EntropyReport report{std::move(id), p, 0.0, {}};
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double contribution = -probs[i] * std::log(probs[i] / norms[i]);
        report.terms.push_back({probs[i], norms[i], contribution});
        report.value += contribution;
    }
    return report;
}

}  // namespace

EntropyReport entropy_TW(const WrightOperator& t, const Window& w)
{
    const auto report = check_k(w, t);
    if (!report.consistent()) throw Error("entropy undefined for inconsistent window");
    std::vector<double> norms;
    for (const auto& m : w.members) norms.push_back(hs_inner(m, m).real());
    return assemble(w.id, 2.0, report.probabilities, norms);
}

EntropyReport entropy_IL_p(const DecoherenceState& ds, const Window& w, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("p-norm requires p >= 1");
    const auto report = check_op(ds, w);
    if (!report.consistent()) throw Error("entropy undefined for inconsistent window");
    for (double prob : report.probabilities)
        if (!(prob > numeric_policy().positivity)) throw Error("entropy undefined for zero-probability member");
    std::vector<double> norms;
    for (const auto& m : w.members) {
        const double n = p_norm(m, p);
        norms.push_back(n * n);
    }
    return assemble(w.id, p, report.probabilities, norms);
}

double fq(double a, double b, double q)
{
    if (!(b > 0.0)) throw Error("f_q requires b > 0");
    if (!(a >= 0.0)) throw Error("f_q requires a >= 0");
    if (!(q >= 1.0)) throw Error("f_q requires q >= 1");
    const double first = a == 0.0 ? 0.0 : a * (std::log(a) - q * std::log(b));
    return first - (1.0 + a) * (std::log1p(a) - q * std::log1p(b));
}

EntropyMinimum entropy_min(const WrightOperator& t, const std::vector<Window>& family)
{
    std::optional<EntropyMinimum> best;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!check_k(family[i], t).consistent()) continue;
        const double value = entropy_TW(t, family[i]).value;
        if (!best || value < best->value - 1e-12) best = EntropyMinimum{value, family[i], i};
    }
    if (!best) throw Error("no consistent window in the family");
    return *best;
}

double entropy_sup(const WrightOperator& t, const Window& w, const std::vector<Window>& family)
{
    double best = -std::numeric_limits<double>::infinity();
    if (check_k(w, t).consistent()) best = entropy_TW(t, w).value;
    for (const auto& candidate : family) {
        if (!(candidate.space == w.space) || !refine_check(w, candidate)) continue;
        if (!check_k(candidate, t).consistent()) continue;
        best = std::max(best, entropy_TW(t, candidate).value);
    }
    if (!std::isfinite(best)) throw Error("no consistent refinement of the window in the family");
    return best;
}

}  // namespace histq
