#include <doctest.h>

#include <cmath>

#include "histq/decoherence.hpp"
#include "histq/error.hpp"
#include "histq/random.hpp"
#include "oracles.hpp"

using namespace histq;

namespace {

Matrix proj(Eigen::Index d, Eigen::Index k)
{
    Matrix p = Matrix::Zero(d, d);
    p(k, k) = 1.0;
    return p;
}

Matrix plus() { return Matrix::Constant(2, 2, 0.5); }

Matrix minus()
{
    Matrix m = Matrix::Constant(2, 2, 0.5);
    m(0, 1) = m(1, 0) = -0.5;
    return m;
}

DecoherenceState still_qubit(Matrix rho) { return DecoherenceState(SystemModel(Matrix::Zero(2, 2), std::move(rho)), TimeGrid({1.0, 2.0, 3.0})); }

std::vector<Matrix> schroedinger_entries(const HomogeneousHistory& h, const std::vector<double>& times, std::size_t d)
{
    std::vector<Matrix> out;
    for (double t : times) {
        auto it = h.entries().find(t);
        out.push_back(it == h.entries().end() ? Matrix(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))) : it->second);
    }
    return out;
}

}  // namespace

TEST_CASE("d_eval: worked qubit values")
{
    const auto ds = still_qubit(proj(2, 0));
    const HomogeneousHistory e_hist{{1.0, Matrix::Identity(2, 2)}};
    CHECK(std::abs(d_eval(ds, e_hist, e_hist) - 1.0) <= 1e-15);

    const HomogeneousHistory plus_once{{1.0, plus()}};
    CHECK(std::abs(d_eval(ds, plus_once, plus_once) - 0.5) <= 1e-15);

    const HomogeneousHistory chain{{1.0, plus()}, {2.0, proj(2, 0)}};
    CHECK(std::abs(d_eval(ds, chain, chain) - 0.25) <= 1e-12);

    const HomogeneousHistory minus_once{{1.0, minus()}};
    CHECK(std::abs(d_eval(ds, plus_once, minus_once)) <= 1e-15);
}

TEST_CASE("d_eval: matches the Schroedinger-picture chain")
{
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
        const auto ds = random_state(rng, d, 3);
        const auto& times = ds.grid.times();
        const auto h = random_history(rng, d, times);
        const auto k = random_history(rng, d, {times[0], times[2]});
        const complex expected = oracle::schroedinger_chain(ds.model.hamiltonian(), ds.model.rho(), 0.0, times,
                                                            schroedinger_entries(h, times, d),
                                                            schroedinger_entries(k, times, d));
        CHECK(std::abs(d_eval(ds, h, k) - expected) <= 1e-10);
    }
}

TEST_CASE("d_eval: histories off the grid are rejected")
{
    const auto ds = still_qubit(proj(2, 0));
    const HomogeneousHistory off{{1.5, plus()}};
    CHECK_THROWS_AS((void)d_eval(ds, off, off), Error);
}

TEST_CASE("decoherence axioms on random scenarios")
{
    Rng rng(103);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
        const auto ds = random_state(rng, d, n);
        const HomogeneousHistory unit;
        CHECK(std::abs(d_eval(ds, unit, unit) - 1.0) <= 1e-12);
        for (int pair = 0; pair < 20; ++pair) {
            const auto p = random_history(rng, d, ds.grid.times());
            const auto q = random_history(rng, d, ds.grid.times());
            CHECK(std::abs(d_eval(ds, p, q) - std::conj(d_eval(ds, q, p))) <= 1e-12);
            CHECK(d_eval(ds, p, p).real() >= -1e-12);
        }
    }
}

TEST_CASE("D_eval: unit, agreement with d_eval, sesquilinearity, mixed supports")
{
    Rng rng(107);
    const auto ds = random_state(rng, 3, 2);
    const auto& support = ds.grid.times();
    const auto e = unit_history(3, support);
    CHECK(std::abs(D_eval(ds, e, e) - 1.0) <= 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_history(rng, 3, support);
        const auto k = random_history(rng, 3, support);
        const auto bh = embed(ds.model, h);
        const auto bk = embed(ds.model, k);
        CHECK(std::abs(D_eval(ds, bh, bk) - d_eval(ds, h, k)) <= 1e-12);

        const complex alpha(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
        auto scaled = bh;
        scaled.op *= alpha;
        CHECK(std::abs(D_eval(ds, scaled, bk) - std::conj(alpha) * D_eval(ds, bh, bk)) <= 1e-12);
        auto scaled2 = bk;
        scaled2.op *= alpha;
        CHECK(std::abs(D_eval(ds, bh, scaled2) - alpha * D_eval(ds, bh, bk)) <= 1e-12);

        std::vector<HistoryTerm> left{{alpha, h}};
        std::vector<HistoryTerm> right{{1.0, k}};
        CHECK(std::abs(D_eval(ds, left, right) - std::conj(alpha) * d_eval(ds, h, k)) <= 1e-12);
    }

    const auto short_op = unit_history(3, {support[0]});
    CHECK_THROWS_WITH_AS((void)D_eval(ds, e, short_op), "mixed temporal support", Error);
}

TEST_CASE("d_sum_eval: basis-sum representation")
{
    const auto pure = still_qubit(proj(2, 0));
    const std::vector<double> two{1.0, 2.0};
    const auto e = unit_history(2, two);
    CHECK(std::abs(d_sum_eval(pure, e, e) - 1.0) <= 1e-12);

    const auto p0 = embed(pure.model, HomogeneousHistory{{1.0, proj(2, 0)}});
    CHECK(std::abs(d_sum_eval(pure, p0, p0) - 1.0) <= 1e-12);

    Rng rng(109);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
        if (d == 3 && n == 3) continue;
        const auto ds = random_state(rng, d, n);
        const auto h = random_history(rng, d, ds.grid.times());
        const auto k = random_history(rng, d, ds.grid.times());
        const complex ref = d_eval(ds, h, k);
        CHECK(std::abs(d_sum_eval(ds, embed(ds.model, h), embed(ds.model, k)) - ref) <= 1e-9);

        // Any orthonormal auxiliary bases give the same value.
        SumBases bases;
        for (std::size_t s = 0; s + 1 < 2 * n; ++s) bases.aux.push_back(random_unitary(rng, d));
        CHECK(std::abs(d_sum_eval(ds, embed(ds.model, h), embed(ds.model, k), bases) - ref) <= 1e-9);
    }
}

TEST_CASE("ILS operator reproduces the functional")
{
    const auto pure = still_qubit(proj(2, 0));
    const std::vector<double> one{1.0};
    const auto ils = ils_construct(pure, one);
    CHECK(std::abs(ils.xd.trace() - 1.0) <= 1e-10);
    const auto p_plus = embed(pure.model, HomogeneousHistory{{1.0, plus()}});
    CHECK(std::abs(ils_eval(ils, p_plus, p_plus) - 0.5) <= 1e-9);

    Rng rng(113);
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::size_t n = 1; n <= 2; ++n) {
            const auto ds = random_state(rng, d, n);
            const auto x = ils_construct(ds, ds.grid.times());
            CHECK(std::abs(x.xd.trace() - 1.0) <= 1e-10);
            double worst = 0.0;
            for (int pair = 0; pair < 100; ++pair) {
                const auto h = random_history(rng, d, ds.grid.times());
                const auto k = random_history(rng, d, ds.grid.times());
                worst = std::max(worst, std::abs(ils_eval(x, embed(ds.model, h), embed(ds.model, k)) - d_eval(ds, h, k)));
            }
            CHECK(worst <= 1e-9);
        }
}

TEST_CASE("ILS cap")
{
    Rng rng(127);
    const auto ds = random_state(rng, 2, 4);
    CHECK_THROWS_WITH_AS((void)ils_construct(ds, ds.grid.times()), "support too large for ILS reconstruction", Error);
}

TEST_CASE("density divides by tr(1)")
{
    const auto ds = still_qubit(proj(2, 0));
    CHECK(std::abs(density(ds, unit_history(2, {1.0}), unit_history(2, {1.0})) - 0.5) <= 1e-15);
    CHECK(std::abs(density(ds, unit_history(2, {1.0, 2.0}), unit_history(2, {1.0, 2.0})) - 0.25) <= 1e-15);

    Rng rng(131);
    const auto rs = random_state(rng, 3, 2);
    const auto p = embed(rs.model, random_history(rng, 3, rs.grid.times()));
    const auto q = embed(rs.model, random_history(rng, 3, rs.grid.times()));
    CHECK(std::abs(density(rs, p, q) - D_eval(rs, p, q) / 9.0) <= 1e-15);
}

TEST_CASE("Cauchy-Schwarz and the Hilbert-Schmidt bound for general operators")
{
    Rng rng(137);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 2);
        const auto ds = random_state(rng, d, n);
        const std::size_t big = int_pow(d, n);
        const auto b1 = make_history_operator(ds.grid.times(), random_ginibre(rng, big, big), d);
        const auto b2 = make_history_operator(ds.grid.times(), random_ginibre(rng, big, big), d);
        const complex cross = D_eval(ds, b1, b2);
        const double d11 = D_eval(ds, b1, b1).real();
        const double d22 = D_eval(ds, b2, b2).real();
        CHECK(d11 >= -1e-12);
        CHECK(std::norm(cross) <= d11 * d22 * (1 + 1e-9));

        // Sharp constant: |D(b,b)| <= lambda_max(rho) (dim H)^{n-1} ||b||_HS^2.
        const double lmax = ds.model.spectral().front().weight;
        const double c = lmax * static_cast<double>(int_pow(d, n - 1));
        CHECK(std::abs(D_eval(ds, b1, b1)) <= c * b1.op.squaredNorm() * (1 + 1e-9));
        if (n == 1) CHECK(std::abs(D_eval(ds, b1, b1)) <= b1.op.squaredNorm() * (1 + 1e-9));
    }
}

TEST_CASE("unit-constant HS bound fails for two-time operators")
{
    // b = sum_k |0,k><k,0|: ||b||_HS^2 = d while pi(b) = d |0><0|, so D(b,b) = d^2 for rho = |0><0|.
    const std::size_t d = 3;
    const auto ds = DecoherenceState(SystemModel(Matrix::Zero(3, 3), proj(3, 0)), TimeGrid({1.0, 2.0}));
    Matrix b = Matrix::Zero(9, 9);
    for (Eigen::Index k = 0; k < 3; ++k) b(0 * 3 + k, k * 3 + 0) = 1.0;
    const auto op = make_history_operator({1.0, 2.0}, b, d);
    CHECK(std::abs(D_eval(ds, op, op) - 9.0) <= 1e-12);
    CHECK(b.squaredNorm() == doctest::Approx(3.0));
}
