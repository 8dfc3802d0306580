#pragma once

#include <string>
#include <utility>
#include <vector>

#include "histq/consistency.hpp"

namespace histq {

struct EntropyTerm {
    double probability;
    double norm_sq;
    double contribution;  // -probability * ln(probability / norm_sq)
};

/// Entropy of one window in nats; `p` is the norm parameter (2 for I_{T,W}).
struct EntropyReport {
    std::string window_id;
    double p = 2.0;
    double value = 0.0;
    std::vector<EntropyTerm> terms;
};

/// I_{T,W} = -sum_i <x_i,T x_i> ln(<x_i,T x_i> / <x_i,x_i>). Requires check_k to pass.
[[nodiscard]] EntropyReport entropy_TW(const WrightOperator& t, const Window& w);

/// Isham-Linden-type entropy -sum_i d(a_i,a_i) ln(d(a_i,a_i) / ||a_i||_p^2) over an
/// operator-consistent projector window with strictly positive probabilities.
[[nodiscard]] EntropyReport entropy_IL_p(const DecoherenceState& ds, const Window& w, double p);

/// f_q(a,b) = a ln(a / b^q) - (1+a) ln((1+a) / (1+b)^q), with 0 ln 0 = 0 at a = 0.
[[nodiscard]] double fq(double a, double b, double q);

struct EntropyMinimum {
    double value;
    Window window;
    std::size_t index;  // position in the family
};

/// Smallest I_{T,W} over the consistent members of `family`. Only an upper bound on the
/// minimum over all consistent sets, since the family is finite. Ties keep the lowest index.
[[nodiscard]] EntropyMinimum entropy_min(const WrightOperator& t, const std::vector<Window>& family);

/// Largest I_{T,W0} over consistent refinements W0 of w found in `family` (w itself included when consistent).
[[nodiscard]] double entropy_sup(const WrightOperator& t, const Window& w, const std::vector<Window>& family);

}  // namespace histq
