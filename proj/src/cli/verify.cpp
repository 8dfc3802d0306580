#include <algorithm>
#include <cmath>
#include <numbers>

#include "cli/commands.hpp"
#include "histq/divergence.hpp"
#include "histq/entropy.hpp"
#include "histq/random.hpp"

namespace histq::cli {

using ojson = nlohmann::ordered_json;

namespace {

struct Check {
    std::string name;
    std::string tag;
    std::size_t samples = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string skipped;

    [[nodiscard]] bool pass() const { return !skipped.empty() || residual <= tolerance; }

    void observe(double r)
    {
        ++samples;
        residual = std::max(residual, r);
    }

    [[nodiscard]] ojson to_json() const
    {
        ojson j = {{"name", name}, {"tag", tag}, {"samples", samples}, {"residual", residual}, {"tolerance", tolerance}};
        j["status"] = !skipped.empty() ? "skipped" : (pass() ? "pass" : "fail");
        if (!skipped.empty()) j["reason"] = skipped;
        return j;
    }
};

bool fits_sector(std::size_t dim, std::size_t n)
{
    std::size_t sector = 1;
    for (std::size_t k = 0; k < 2 * n && sector <= kSectorCap; ++k) sector *= dim;
    return sector <= kSectorCap;
}

}  // namespace

Outcome cmd_verify(const Scenario& s, std::uint64_t seed)
{
    const auto ds = s.state();
    const auto& tol = numeric_policy();
    Rng rng(seed);
    constexpr std::size_t kRandomPairs = 30;

    // Scenario histories followed by seeded random ones on the grid.
    std::vector<HomogeneousHistory> hs{HomogeneousHistory{}};
    for (const auto& nh : s.histories) hs.push_back(nh.history);
    for (std::size_t i = 0; i < kRandomPairs; ++i) hs.push_back(random_history(rng, s.dim, s.times));

    Check normalization{"normalization", "decf1", 0, 0.0, 1e-12, {}};
    Check hermiticity{"hermiticity", "decf1", 0, 0.0, 1e-12, {}};
    Check positivity{"positivity", "decf1", 0, 0.0, 1e-12, {}};
    Check sum_rep{"sum_representation", "decf", 0, 0.0, tol.residual, {}};
    Check ils_rep{"ils_representation", "ILS2", 0, 0.0, tol.residual, {}};

    normalization.observe(std::abs(d_eval(ds, {}, {}) - complex(1.0)));
    std::map<std::vector<double>, IlsOperator> ils_cache;
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i; j < hs.size(); ++j) {
            const complex dij = d_eval(ds, hs[i], hs[j]);
            hermiticity.observe(std::abs(dij - std::conj(d_eval(ds, hs[j], hs[i]))));
            if (i == j) positivity.observe(std::max(0.0, -dij.real()));
            const auto support = unify_supports(hs[i].times(), hs[j].times());
            const auto p = embed(ds.model, hs[i], support);
            const auto q = embed(ds.model, hs[j], support);
            sum_rep.observe(std::abs(d_sum_eval(ds, p, q) - dij));
            if (fits_sector(s.dim, support.size())) {
                auto it = ils_cache.find(support);
                if (it == ils_cache.end()) it = ils_cache.emplace(support, ils_construct(ds, support)).first;
                ils_rep.observe(std::abs(ils_eval(it->second, p, q) - dij));
            }
        }
    if (ils_rep.samples == 0) ils_rep.skipped = "every support exceeds the sector cap";

    Check wright_unit{"wright_unit", "propa", 0, 0.0, 1e-12, {}};
    Check wright_form{"wright_form", "propa", 0, 0.0, tol.residual, {}};
    Check wright_adjoint{"wright_self_adjoint", "propa", 0, 0.0, 1e-10, {}};
    Check bridge{"consistency_bridge", "propa", 0, 0.0, 0.0, {}};
    Check monotone{"refinement_monotonicity", "ent", 0, 0.0, 1e-10, {}};
    if (fits_sector(s.dim, s.times.size())) {
        const auto analysis = analyse_windows(s, ds);
        const auto& t = analysis.wright;
        const auto e = Proposition::unit(t.space());
        wright_unit.observe(std::abs(t.form(e, e) - complex(1.0)));
        const auto n = static_cast<Eigen::Index>(t.space().op_dim());
        for (std::size_t i = 0; i < kRandomPairs; ++i) {
            const Proposition b{t.space(), random_ginibre(rng, static_cast<std::size_t>(n), static_cast<std::size_t>(n))};
            const auto hb = b.as_history();
            wright_form.observe(std::abs(t.form(b, b) - D_eval(ds, hb, hb)));
        }
        const Matrix& sup = t.superop();
        wright_adjoint.observe(max_abs(sup - sup.adjoint()) / std::max(1.0, max_abs(sup)));

        const auto& result = analysis.search;
        for (std::size_t i = 0; i < result.windows.size(); ++i) {
            const auto& op = result.operator_reports[i];
            if (!op) continue;
            const auto k_report = check_k(result.windows[i], t);
            if (std::any_of(k_report.probabilities.begin(), k_report.probabilities.end(), [](double p) { return p <= 1e-12; }))
                continue;
            bridge.observe(op->consistent() == k_report.consistent() ? 0.0 : 1.0);
        }
        if (bridge.samples == 0) bridge.skipped = "no projector window with positive probabilities";

        const auto& ws = result.windows;
        for (std::size_t a = 0; a < ws.size(); ++a)
            for (std::size_t b = 0; b < ws.size(); ++b) {
                if (a == b || !refine_check(ws[a], ws[b])) continue;
                monotone.observe(std::max(0.0, entropy_TW(t, ws[b]).value - entropy_TW(t, ws[a]).value));
                if (!result.operator_reports[a] || !result.operator_reports[b]) continue;
                for (double p : {1.0, 1.5, 2.0}) {
                    try {
                        monotone.observe(std::max(0.0, entropy_IL_p(ds, ws[b], p).value - entropy_IL_p(ds, ws[a], p).value));
                    } catch (const Error&) {
                        // IL undefined on one side; TW already covers the pair
                    }
                }
            }
        if (monotone.samples == 0) monotone.skipped = "no refinement pairs among the windows";
    } else {
        for (auto* c : {&wright_unit, &wright_form, &wright_adjoint, &bridge, &monotone})
            c->skipped = "grid sector exceeds the cap";
    }

    Check fq_check{"fq_nonnegative", "ent", 0, 0.0, 1e-12, {}};
    for (double q : {1.0, 1.5, 2.0, 3.0})
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const double a = 0.1 * std::pow(100.0, i / 19.0), b = 0.1 * std::pow(100.0, j / 19.0);
                fq_check.observe(std::max(0.0, -fq(a, b, q)));
            }

    Check b1_direct{"b1_direct_vs_reduced", "decf", 0, 0.0, 1e-10, {}};
    const auto omega = OmegaRule::geometric();
    for (std::uint64_t n = 2; n <= 6; ++n)
        b1_direct.observe(std::abs(appendix_b1_direct(omega, n) - appendix_b1_series(omega, {n}).points[0].second));
    Check b2_doubling{"b2_doubling_difference", "decf", 0, 0.0, 0.05, {}};
    const auto b2 = appendix_b2_series(omega, powers_of_two(10, 12));
    for (std::size_t i = 0; i + 1 < b2.points.size(); ++i)
        b2_doubling.observe(std::abs(b2.points[i + 1].second - b2.points[i].second - std::numbers::ln2));

    ojson doc = {{"command", "verify"}, {"scenario", s.name}, {"dim", s.dim}, {"times", s.times}, {"seed", seed}};
    ojson checks = ojson::array();
    bool pass = true;
    for (const auto* c : {&normalization, &hermiticity, &positivity, &sum_rep, &ils_rep, &wright_unit, &wright_form,
                          &wright_adjoint, &bridge, &monotone, &fq_check, &b1_direct, &b2_doubling}) {
        checks.push_back(c->to_json());
        pass = pass && c->pass();
    }
    doc["checks"] = checks;
    doc["pass"] = pass;
    return {{{"verify.json", dump(doc)}}, pass};
}

}  // namespace histq::cli
