#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "histq/qm_core.hpp"

namespace histq {

/// Spectral weights omega_k, k = 1, 2, ... of the initial state.
class OmegaRule {
public:
    /// omega_k = (1 - r) r^{k-1}; r = 1/2 gives 2^{-k}.
    static OmegaRule geometric(double ratio = 0.5);
    /// Listed weights, zero beyond the end of the list.
    static OmegaRule explicit_weights(std::vector<double> weights);

    [[nodiscard]] double operator()(std::uint64_t k) const;
    [[nodiscard]] const std::string& description() const { return description_; }

private:
    OmegaRule() = default;
    double ratio_ = 0.5;
    std::vector<double> weights_;
    bool geometric_ = true;
    std::string description_;
};

enum class SeriesLabel { B1, B2 };

[[nodiscard]] std::string to_string(SeriesLabel label);

struct TruncationSeries {
    SeriesLabel label;
    std::vector<std::pair<std::uint64_t, double>> points;  // (N, value), N strictly increasing
    std::string omega_rule;
};

enum class Growth { bounded, logarithmic, linear };

[[nodiscard]] std::string to_string(Growth g);

struct GrowthVerdict {
    Growth classification;
    double slope;     // coefficient of ln N or N; 0 for bounded
    double residual;  // RMS fit residual relative to max |value|
};

inline constexpr double kGrowthResidualThreshold = 0.05;

/// D(P_N, 1) for P_N = sum_{i=2}^N P_{phi_i}, phi_i = (|psi_i psi_1> + |psi_1 psi_i>)/sqrt 2,
/// through the reduced per-i formula with q the identity.
[[nodiscard]] TruncationSeries appendix_b1_series(const OmegaRule& omega, const std::vector<std::uint64_t>& n_list);

/// S(N) = sum_{k1,k4 <= N} omega_{k1} / (k1 + k4).
[[nodiscard]] TruncationSeries appendix_b2_series(const OmegaRule& omega, const std::vector<std::uint64_t>& n_list);

/// Least-squares fits against const, ln N and N; picks the best residual, preferring the simpler model on ties.
[[nodiscard]] GrowthVerdict growth_fit(const TruncationSeries& series);

/// Direct four-index basis-sum evaluation of D(P_N, 1) on the N-dimensional truncation (N <= 6).
[[nodiscard]] double appendix_b1_direct(const OmegaRule& omega, std::uint64_t n);

/// The projector P_N on the N^2-dimensional truncated two-time space.
[[nodiscard]] Matrix appendix_b1_projector(std::uint64_t n);

/// Truncation of h_n = sum_{l=2}^{n} sum_{k1+k4=l} (1/l) |e_k4 psi_k1><psi_k1 e_k4| to indices <= dim.
[[nodiscard]] Matrix appendix_b2_operator(std::uint64_t n, std::uint64_t dim);

/// Powers of two from 2^lo to 2^hi.
[[nodiscard]] std::vector<std::uint64_t> powers_of_two(unsigned lo, unsigned hi);

/// CSV with header "N,value", one row per point, values with 17 significant digits.
[[nodiscard]] std::string to_csv(const TruncationSeries& series);

}  // namespace histq
