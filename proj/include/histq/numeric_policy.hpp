#pragma once

#include <string>

namespace histq {

/// Every tolerance used by the engine lives here.
struct NumericPolicy {
    double equality = 1e-10;        // relative equality of operators
    double hermiticity = 1e-12;     // max|A - A^dag| <= hermiticity * max|A|
    double unitarity = 1e-12;
    double projector = 1e-10;       // max|A^2 - A|
    double trace_one = 1e-12;       // trace and spectral weight normalization
    double orthonormality = 1e-12;
    double reconstruction = 1e-10;  // sum_i w_i |psi_i><psi_i| against rho
    double residual = 1e-9;         // consistency residuals, representation agreement
    double positivity = 1e-12;      // strict-positivity threshold for window probabilities
    double imaginary = 1e-9;        // largest discarded imaginary part of a quadratic form
};

/// Process-wide policy. Defaults unless `set_numeric_policy` was called at startup.
[[nodiscard]] const NumericPolicy& numeric_policy();

void set_numeric_policy(const NumericPolicy& policy);

/// Parses overrides of the form "residual=1e-8,positivity=1e-14" on top of `base`.
/// Unknown keys or malformed numbers throw histq::Error.
[[nodiscard]] NumericPolicy parse_policy_overrides(const std::string& spec, NumericPolicy base = {});

}  // namespace histq
