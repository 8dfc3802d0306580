#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv)
{
    using namespace histq::cli;

    CLI::App app{"histq: decoherence functionals, consistent windows and history entropies"};
    app.require_subcommand(1);
    Options opts;
    for (const char* name : {"decohere", "windows", "entropy", "diverge", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opts.scenario, "scenario JSON file")->required();
        sub->add_option("--out", opts.out, "output directory (default histq-out)");
        sub->add_option("--seed", opts.seed, "overrides the scenario seed");
        sub->add_option("--max-n", opts.max_n, "largest truncation N for diverge")->check(CLI::PositiveNumber);
        sub->add_option("--series", opts.series, "b1 or b2 (default both)")->check(CLI::IsMember({"b1", "b2"}));
        sub->callback([&opts, sub] { opts.command = sub->get_name(); });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    if (const char* env = std::getenv("HISTQ_TOL"); env != nullptr && *env != '\0') {
        try {
            histq::set_numeric_policy(histq::parse_policy_overrides(env));
        } catch (const histq::Error& e) {
            std::cerr << "validation error in HISTQ_TOL: " << e.what() << "\n";
            return exit_validation;
        }
    }
    return run(opts, std::cerr);
}
