#include "histq/divergence.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "histq/decoherence.hpp"
#include "histq/error.hpp"

namespace histq {

OmegaRule OmegaRule::geometric(double ratio)
{
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error("geometric ratio must lie in (0, 1)");
    OmegaRule rule;
    rule.ratio_ = ratio;
    rule.geometric_ = true;
    char buf[64];
    std::snprintf(buf, sizeof buf, "geometric(ratio=%.17g)", ratio);
    rule.description_ = buf;
    return rule;
}

OmegaRule OmegaRule::explicit_weights(std::vector<double> weights)
{
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error("weights must be finite and nonnegative");
    OmegaRule rule;
    rule.geometric_ = false;
    rule.weights_ = std::move(weights);
    rule.description_ = "explicit(" + std::to_string(rule.weights_.size()) + " weights)";
    return rule;
}

double OmegaRule::operator()(std::uint64_t k) const
{
    if (k == 0) throw Error("weights are indexed from 1");
    if (geometric_) return (1.0 - ratio_) * std::pow(ratio_, static_cast<double>(k - 1));
    return k <= weights_.size() ? weights_[k - 1] : 0.0;
}

std::string to_string(SeriesLabel label) { return label == SeriesLabel::B1 ? "B1" : "B2"; }

std::string to_string(Growth g)
{
    switch (g) {
    case Growth::bounded: return "bounded";
    case Growth::logarithmic: return "logarithmic";
    case Growth::linear: return "linear";
    }
    return "unknown";
}

namespace {

void check_n_list(const std::vector<std::uint64_t>& n_list, std::uint64_t min_n)
{
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < min_n) throw Error("truncation N below the minimum of " + std::to_string(min_n));
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error("truncation list is not strictly increasing");
    }
}

// f_{j1,j2,j3}(1) = <psi_j1 psi_j2, psi_j2 psi_j3>.
double f_identity(std::uint64_t j1, std::uint64_t j2, std::uint64_t j3) { return (j1 == j2 && j2 == j3) ? 1.0 : 0.0; }

}  // namespace

TruncationSeries appendix_b1_series(const OmegaRule& omega, const std::vector<std::uint64_t>& n_list)
{
    check_n_list(n_list, 2);
    constexpr std::uint64_t i1 = 1;
    TruncationSeries series{SeriesLabel::B1, {}, omega.description()};
    double value = 0.0;
    std::uint64_t done = 1;  // terms i = 2..done accumulated
    for (std::uint64_t n : n_list) {
        for (std::uint64_t i = done + 1; i <= n; ++i) {
            // D(P_phi_i, 1) = 1/2 sum_{j2} (w_i1 f_{i1,j2,i1} + w_i f_{i,j2,i}); only j2 = i1 and
            // j2 = i contribute for the identity, so the j2 sum collapses to those two indices.
            double term = 0.0;
            for (std::uint64_t j2 : {i1, i}) term += omega(i1) * f_identity(i1, j2, i1) + omega(i) * f_identity(i, j2, i);
            value += 0.5 * term;
        }
        done = n;
        series.points.emplace_back(n, value);
    }
    return series;
}

TruncationSeries appendix_b2_series(const OmegaRule& omega, const std::vector<std::uint64_t>& n_list)
{
    check_n_list(n_list, 1);
    TruncationSeries series{SeriesLabel::B2, {}, omega.description()};
    for (std::uint64_t n : n_list) {
        double total = 0.0;
        for (std::uint64_t k1 = 1; k1 <= n; ++k1) {
            const double w = omega(k1);
            if (w == 0.0) continue;
            double inner = 0.0;
            for (std::uint64_t k4 = n; k4 >= 1; --k4) inner += 1.0 / static_cast<double>(k1 + k4);
            total += w * inner;
        }
        series.points.emplace_back(n, total);
    }
    return series;
}

namespace {

// Least squares value ~ c0 + c1 * x; returns (slope, rms residual).
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

}  // namespace

GrowthVerdict growth_fit(const TruncationSeries& series)
{
    const auto& pts = series.points;
    if (pts.size() < 5) throw Error("growth fit needs at least 5 points");
    if (static_cast<double>(pts.back().first) < 100.0 * static_cast<double>(pts.front().first))
        throw Error("growth fit needs points spanning at least 2 decades of N");

    std::vector<double> ln_n, lin_n, y;
    double scale = 0.0;
    for (const auto& [n, v] : pts) {
        ln_n.push_back(std::log(static_cast<double>(n)));
        lin_n.push_back(static_cast<double>(n));
        y.push_back(v);
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) scale = 1.0;

    const std::vector<double> zeros(y.size(), 0.0);
    const auto [s0, r0] = fit_line(zeros, y);
    const auto [s1, r1] = fit_line(ln_n, y);
    const auto [s2, r2] = fit_line(lin_n, y);
    (void)s0;

    const GrowthVerdict candidates[] = {
        {Growth::bounded, 0.0, r0 / scale},
        {Growth::logarithmic, s1, r1 / scale},
        {Growth::linear, s2, r2 / scale},
    };
    double best = candidates[0].residual;
    for (const auto& c : candidates) best = std::min(best, c.residual);
    // Simplest model within a small margin of the best residual.
    for (const auto& c : candidates)
        if (c.residual <= best + 1e-3) return c;
    return candidates[2];
}

Matrix appendix_b1_projector(std::uint64_t n)
{
    if (n < 2) throw Error("B1 truncation needs N >= 2");
    const auto d = static_cast<Eigen::Index>(n);
    Matrix p = Matrix::Zero(d * d, d * d);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 1; i < d; ++i) {
        // phi_i = (|i, 0> + |0, i>)/sqrt 2 in zero-based indices, i1 -> 0.
        Vector phi = Vector::Zero(d * d);
        phi(i * d + 0) += s;
        phi(0 * d + i) += s;
        p += phi * phi.adjoint();
    }
    return p;
}

double appendix_b1_direct(const OmegaRule& omega, std::uint64_t n)
{
    if (n < 2 || n > 6) throw Error("direct B1 evaluation supports 2 <= N <= 6");
    const auto d = static_cast<Eigen::Index>(n);
    std::vector<double> weights;
    for (std::uint64_t k = 1; k <= n; ++k) weights.push_back(omega(k));
    const Matrix psi = Matrix::Identity(d, d);
    const Matrix q = Matrix::Identity(d * d, d * d);
    const complex value = decf_sum(weights, psi, appendix_b1_projector(n), q, n, 2);
    return value.real();
}

Matrix appendix_b2_operator(std::uint64_t n, std::uint64_t dim)
{
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix h = Matrix::Zero(d * d, d * d);
    // |e_k4 (x) psi_k1><psi_k1 (x) e_k4| with both bases the computational one.
    for (std::uint64_t k1 = 1; k1 <= dim; ++k1)
        for (std::uint64_t k4 = 1; k4 <= dim; ++k4) {
            const std::uint64_t l = k1 + k4;
            if (l > n) continue;
            const auto row = static_cast<Eigen::Index>((k4 - 1) * dim + (k1 - 1));
            const auto col = static_cast<Eigen::Index>((k1 - 1) * dim + (k4 - 1));
            h(row, col) += 1.0 / static_cast<double>(l);
        }
    return h;
}

std::vector<std::uint64_t> powers_of_two(unsigned lo, unsigned hi)
{
    std::vector<std::uint64_t> out;
    for (unsigned k = lo; k <= hi; ++k) out.push_back(std::uint64_t{1} << k);
    return out;
}

std::string to_csv(const TruncationSeries& series)
{
    std::ostringstream out;
    out << "N,value\n";
    char buf[64];
    for (const auto& [n, v] : series.points) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << n << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace histq
