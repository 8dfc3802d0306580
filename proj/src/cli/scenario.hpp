#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "histq/consistency.hpp"
#include "histq/decoherence.hpp"
#include "histq/error.hpp"
#include "histq/numeric_policy.hpp"

namespace histq::cli {

/// Invalid input; `field` is a dotted/bracketed path into the scenario document.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field))
    {
    }
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct NamedHistory {
    std::string name;
    HomogeneousHistory history;
};

struct Scenario {
    std::string name;
    std::size_t dim = 0;
    Matrix hamiltonian;
    Matrix rho;
    double t0 = 0.0;
    std::vector<double> times;
    std::vector<NamedHistory> histories;
    PvmChoices pvms;  // one list of alternatives per grid time
    std::vector<double> entropy_p;
    std::uint64_t seed = 0;
    std::size_t budget = SearchOptions{}.budget;

    [[nodiscard]] DecoherenceState state() const;
};

[[nodiscard]] Scenario parse_scenario(const nlohmann::json& doc);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Complex matrix as {"re": [[...]], "im": [[...]]}; "im" may be omitted.
[[nodiscard]] nlohmann::ordered_json matrix_to_json(const Matrix& m);

}  // namespace histq::cli
