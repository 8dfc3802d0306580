#include <doctest.h>

#include <algorithm>

#include "histq/consistency.hpp"
#include "histq/error.hpp"
#include "histq/random.hpp"
#include "histq/set_partitions.hpp"
#include "oracles.hpp"

using namespace histq;

namespace {

Matrix proj(Eigen::Index d, Eigen::Index k)
{
    Matrix p = Matrix::Zero(d, d);
    p(k, k) = 1.0;
    return p;
}

Matrix diag2(double a, double b)
{
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

DecoherenceState still_qubit(Matrix rho) { return DecoherenceState(SystemModel(Matrix::Zero(2, 2), std::move(rho)), TimeGrid({1.0, 2.0})); }

const std::vector<double> kOne{1.0};
const std::vector<double> kTwo{1.0, 2.0};

bool has(const ConsistencyReport& r, Condition c)
{
    return std::find(r.violated.begin(), r.violated.end(), c) != r.violated.end();
}

bool same_ops(const Window& a, const Window& b)
{
    if (a.members.size() != b.members.size()) return false;
    for (std::size_t i = 0; i < a.members.size(); ++i)
        if (max_abs(a.members[i].op - b.members[i].op) > 1e-9) return false;
    return true;
}

}  // namespace

TEST_CASE("set partitions: restricted growth strings enumerate Bell-many partitions")
{
    for (std::size_t n = 1; n <= 8; ++n) {
        SetPartitions parts(n);
        std::uint64_t count = 0;
        std::vector<std::size_t> previous;
        do {
            const auto& a = parts.current();
            CHECK(a[0] == 0);
            std::size_t mx = 0;
            for (std::size_t i = 1; i < n; ++i) {
                CHECK(a[i] <= mx + 1);
                mx = std::max(mx, a[i]);
            }
            if (!previous.empty()) CHECK(previous < a);
            previous = a;
            ++count;
        } while (parts.next());
        CHECK(count == bell_number(n));
        if (n <= 6) CHECK(count == oracle::count_partitions_bruteforce(n));
    }
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(12) == 4213597);
    const auto blocks = blocks_of({0, 1, 0, 2});
    CHECK(blocks == std::vector<std::vector<std::size_t>>{{0, 2}, {1}, {3}});
}

TEST_CASE("check_k: examples")
{
    const auto mixed = still_qubit(diag2(0.75, 0.25));
    const auto t = wright_construct(mixed, kOne);
    const auto e_only = Window::from_ops(t.space(), {Matrix::Identity(2, 2)});
    const auto r_e = check_k(e_only, t);
    CHECK(r_e.consistent());
    CHECK(r_e.probabilities.at(0) == doctest::Approx(1.0));

    const auto comp = Window::from_ops(t.space(), {proj(2, 0), proj(2, 1)});
    const auto r = check_k(comp, t);
    CHECK(r.consistent());
    CHECK(r.probabilities[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.probabilities[1] == doctest::Approx(0.25).epsilon(1e-14));

    const auto pure = still_qubit(proj(2, 0));
    const auto tp = wright_construct(pure, kOne);
    const auto rp = check_k(Window::from_ops(tp.space(), {proj(2, 0), proj(2, 1)}), tp);
    CHECK_FALSE(rp.consistent());
    CHECK(has(rp, Condition::positivity));
    CHECK(rp.violated.size() == 1);
}

TEST_CASE("check_k: orthogonality, completeness and additivity violations")
{
    const auto mixed = still_qubit(diag2(0.75, 0.25));
    const auto t = wright_construct(mixed, kOne);
    const Matrix plus = Matrix::Constant(2, 2, 0.5);
    const auto overlap = check_k(Window::from_ops(t.space(), {proj(2, 0), plus}), t);
    CHECK(has(overlap, Condition::orthogonality));
    CHECK(has(overlap, Condition::completeness));
    const auto partial = check_k(Window::from_ops(t.space(), {proj(2, 0)}), t);
    CHECK(has(partial, Condition::completeness));
    CHECK(has(partial, Condition::additivity));

    const auto other = wright_construct(still_qubit(diag2(0.5, 0.5)), kTwo);
    CHECK_THROWS_WITH_AS((void)check_k(Window::from_ops(other.space(), {Matrix::Identity(4, 4)}), t),
                         "proposition sector mismatch", Error);
}

TEST_CASE("check_op: examples")
{
    const auto pure = still_qubit(proj(2, 0));
    const PropositionSpace one(kOne, 2);
    CHECK(check_op(pure, Window::from_ops(one, {proj(2, 0), proj(2, 1)})).consistent());

    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ds = random_state(rng, 3, 1);
        const auto pvm = random_basis_pvm(rng, 3);
        CHECK(check_op(ds, Window::from_ops(PropositionSpace(ds.grid.times(), 3), pvm)).consistent());
    }

    const PropositionSpace two(kTwo, 2);
    std::vector<Matrix> products;
    for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index b = 0; b < 2; ++b) products.push_back(kron(proj(2, a), proj(2, b)));
    const auto w = Window::from_ops(two, products);
    CHECK(check_op(pure, w).consistent());
    const auto t = wright_construct(pure, kTwo);
    CHECK_FALSE(check_k(w, t).consistent());

    CHECK_THROWS_WITH_AS((void)check_op(pure, Window::from_ops(one, {0.5 * Matrix::Identity(2, 2)})),
                         "window member is not a projector", Error);
}

TEST_CASE("check_op: interference makes Hadamard-then-computational histories inconsistent")
{
    // rho = |+><+|, no dynamics: histories {+/-, then 0/1} interfere when coarse-grained.
    const Matrix plus = Matrix::Constant(2, 2, 0.5);
    const auto ds = DecoherenceState(SystemModel(Matrix::Zero(2, 2), plus), TimeGrid({1.0, 2.0}));
    const auto had = hadamard_pvm(2);
    const PropositionSpace two(kTwo, 2);
    const auto w = Window::from_ops(two, {kron(had[0], proj(2, 0)) + kron(had[1], proj(2, 1)),
                                          kron(had[0], proj(2, 1)) + kron(had[1], proj(2, 0))});
    const auto r = check_op(ds, w);
    CHECK(r.consistent());
    // Which-path at t1 followed by the conjugate basis at t2 interferes: D(P0 P+, P1 P+) = 1/4.
    std::vector<Matrix> paths;
    for (Eigen::Index a = 0; a < 2; ++a)
        for (const auto& h : had) paths.push_back(kron(proj(2, a), h));
    const auto w2 = Window::from_ops(two, paths);
    const auto r2 = check_op(ds, w2);
    CHECK_FALSE(r2.consistent());
    CHECK(has(r2, Condition::re_cross_term));
}

TEST_CASE("refine_check: examples")
{
    const PropositionSpace one(kOne, 2);
    const auto comp = Window::from_ops(one, {proj(2, 0), proj(2, 1)});
    const auto had = Window::from_ops(one, hadamard_pvm(2));
    const auto e_only = Window::from_ops(one, {Matrix::Identity(2, 2)});
    CHECK(refine_check(comp, comp));
    CHECK(refine_check(e_only, comp));
    CHECK(refine_check(e_only, had));
    CHECK_FALSE(refine_check(comp, had));
    CHECK_FALSE(refine_check(comp, e_only));

    Rng rng(67);
    const auto pvm = random_basis_pvm(rng, 4);
    const PropositionSpace four({1.0}, 4);
    const auto fine = Window::from_ops(four, pvm);
    const auto coarse = Window::from_ops(four, {pvm[0] + pvm[2], pvm[1] + pvm[3]});
    const auto other = Window::from_ops(four, {pvm[0] + pvm[1], pvm[2] + pvm[3]});
    CHECK(refine_check(coarse, fine));
    CHECK_FALSE(refine_check(fine, coarse));
    CHECK_FALSE(refine_check(coarse, other));
}

TEST_CASE("refine_check: non-orthogonal fine windows go through the exhaustive assignment")
{
    const PropositionSpace one(kOne, 2);
    const Matrix a = Matrix::Constant(2, 2, 0.5);
    const Matrix b = Matrix::Identity(2, 2) - a;
    const auto coarse = Window::from_ops(one, {Matrix::Identity(2, 2) + a});
    const auto fine = Window::from_ops(one, {a, a, b});
    CHECK(refine_check(coarse, fine));
}

TEST_CASE("search_windows: qubit family with computational and Hadamard bases")
{
    const auto ds = still_qubit(diag2(0.75, 0.25));
    const auto t = wright_construct(ds, kOne);
    const PvmChoices choices{{computational_pvm(2), hadamard_pvm(2)}};
    const auto result = search_windows(ds, t, choices);
    REQUIRE(result.windows.size() == 3);
    CHECK(result.windows[0].members.size() == 2);
    CHECK(result.windows[1].members.size() == 2);
    CHECK(result.windows[2].members.size() == 1);
    CHECK(result.partitions_examined == 4);

    bool saw_comp = false, saw_had = false;
    for (const auto& w : result.windows) {
        double sum = 0.0;
        for (double p : w.probabilities) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        if (w.members.size() != 2) continue;
        if (std::abs(w.members[0].op(0, 1)) < 1e-12) {
            saw_comp = true;
            auto probs = w.probabilities;
            std::sort(probs.begin(), probs.end());
            CHECK(probs[0] == doctest::Approx(0.25));
            CHECK(probs[1] == doctest::Approx(0.75));
        } else {
            saw_had = true;
            CHECK(w.probabilities[0] == doctest::Approx(0.5));
            CHECK(w.probabilities[1] == doctest::Approx(0.5));
        }
    }
    CHECK(saw_comp);
    CHECK(saw_had);
    for (const auto& r : result.operator_reports) {
        REQUIRE(r.has_value());
        CHECK(r->consistent());
    }
    CHECK(result.windows[0].id == "w0");

    const auto comp = Window::from_ops(t.space(), computational_pvm(2));
    CHECK(is_maximally_refined(comp, result.windows));
    CHECK_FALSE(is_maximally_refined(result.windows[2], result.windows));
}

TEST_CASE("search_windows: empty PVM lists give only e; caps and budgets")
{
    const auto ds = still_qubit(diag2(0.75, 0.25));
    const auto t = wright_construct(ds, kOne);
    const auto only_e = search_windows(ds, t, {});
    REQUIRE(only_e.windows.size() == 1);
    CHECK(max_abs(only_e.windows[0].members[0].op - Matrix::Identity(2, 2)) == 0.0);

    const auto limited = search_windows(ds, t, {{computational_pvm(2), hadamard_pvm(2)}}, SearchOptions{3});
    CHECK(limited.budget_exhausted);
    CHECK(limited.partitions_examined == 3);

    Rng rng(71);
    const auto ds4 = random_state(rng, 4, 2);
    const PropositionSpace space(ds4.grid.times(), 4);
    CHECK_THROWS_WITH_AS((void)product_family(ds4, space, {computational_pvm(4), computational_pvm(4)}),
                         "base family exceeds the cap of 12 product histories", Error);
    CHECK(product_family(ds4, space, {computational_pvm(4), {}}).size() == 4);
}

TEST_CASE("search_windows: invariant under reordering of PVM elements")
{
    Rng rng(73);
    for (int trial = 0; trial < 4; ++trial) {
        const bool two_times = trial % 2 == 1;
        const std::size_t d = two_times ? 2 : 3;
        auto ds = two_times ? DecoherenceState(SystemModel(Matrix::Zero(2, 2), random_density(rng, 2)), TimeGrid({1.0, 2.0}))
                            : random_state(rng, 3, 1);
        const auto t = wright_construct(ds, ds.grid.times());
        PvmChoices choices;
        for (std::size_t k = 0; k < ds.grid.size(); ++k) choices.push_back({computational_pvm(d), hadamard_pvm(d)});
        const auto base = search_windows(ds, t, choices);
        CHECK(base.windows.size() >= 1);

        PvmChoices shuffled = choices;
        for (auto& alts : shuffled) {
            std::reverse(alts.begin(), alts.end());
            for (auto& pvm : alts) std::shuffle(pvm.begin(), pvm.end(), rng);
        }
        const auto again = search_windows(ds, t, shuffled);
        REQUIRE(again.windows.size() == base.windows.size());
        for (std::size_t i = 0; i < base.windows.size(); ++i) CHECK(same_ops(base.windows[i], again.windows[i]));
    }
}

TEST_CASE("additivity readings differ on windows with more than two members")
{
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    const DecoherenceState ds(SystemModel(h, rho), TimeGrid({1.0, 2.0}));
    const auto t = wright_construct(ds, ds.grid.times());
    const auto family = product_family(ds, t.space(), {hadamard_pvm(2), computational_pvm(2)});
    const Window w{"w", t.space(), family, {}};

    // Probabilities sum to 1 but some pair has a nonzero real cross term.
    double max_cross = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            max_cross = std::max(max_cross, std::abs(D_eval(ds, family[i].as_history(), family[j].as_history()).real()));
    REQUIRE(max_cross > 1e-3);

    CHECK(check_k(w, t, Additivity::total).consistent());
    const auto strict = check_k(w, t);
    CHECK_FALSE(strict.consistent());
    CHECK(strict.violated == std::vector<Condition>{Condition::additivity});
    CHECK_FALSE(check_op(ds, w).consistent());

    // Two-member windows: sum-to-one already forces the single cross term to vanish.
    const auto two = Window::from_ops(t.space(), {family[0].op + family[1].op, family[2].op + family[3].op});
    CHECK(check_k(two, t, Additivity::total).consistent() == check_k(two, t).consistent());
}
