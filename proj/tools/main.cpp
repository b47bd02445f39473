#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "run.hpp"

using qdburst::cli::Command;
using qdburst::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"Quasi-deterministic burstiness bounds for aggregates of periodic flows"};
    app.require_subcommand(1);

    RunConfig config;
    config.threads = qdburst::cli::threads_from_env();

    const std::map<std::string, qdburst::BoundMethod> methods{{"dkw", qdburst::BoundMethod::Dkw},
                                                              {"exact", qdburst::BoundMethod::Exact}};
    const std::map<std::string, qdburst::cli::Combiner> combiners{{"conv", qdburst::cli::Combiner::Conv},
                                                                  {"union", qdburst::cli::Combiner::Union},
                                                                  {"both", qdburst::cli::Combiner::Both}};
    const std::map<std::string, qdburst::cli::OutputFormat> formats{{"csv", qdburst::cli::OutputFormat::Csv},
                                                                    {"json", qdburst::cli::OutputFormat::Json}};
    std::optional<std::int64_t> b_min;
    std::optional<std::int64_t> b_max;

    auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("-s,--scenario", config.scenario_path, "Scenario JSON file");
        if (needs_scenario) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--b-min", b_min, "First grid point, in quanta");
        sub->add_option("--b-max", b_max, "Last grid point, in quanta");
        sub->add_option("--step", config.grid.step, "Grid step, in quanta");
        sub->add_option("--format", config.format, "csv or json")
            ->transform(CLI::CheckedTransformer(formats))
            ->option_text("csv|json");
        sub->add_option("-o,--output", config.output_path, "Output file (default stdout)");
        sub->add_flag("--exact-output", config.exact_output, "Print exact values as num/den");
    };
    auto add_simulation = [&](CLI::App* sub) {
        sub->add_option("--trials", config.trials, "Monte Carlo trials");
        sub->add_option("--seed", config.seed, "RNG seed");
        sub->add_option("--alpha", config.alpha, "KS band level (0.01 gives a 99% band)");
    };

    struct Entry {
        const char* name;
        Command command;
        const char* help;
    };
    const Entry entries[] = {
        {"bound-dkw", Command::BoundDkw, "Closed-form bound per group, combined by convolution"},
        {"bound-exact", Command::BoundExact, "Exact order-statistic bound per group, combined by convolution"},
        {"burst-for-eps", Command::BurstForEps, "Quasi-deterministic burst for a violation probability"},
        {"same-period", Command::SamePeriod, "Bounds for flows sharing one period with mixed packet sizes"},
        {"combine", Command::Combine, "Convolution and union-bound combination of group bounds"},
        {"simulate", Command::Simulate, "Monte Carlo tail of the aggregate burstiness"},
        {"figure", Command::Figure, "Write the data behind each figure panel"},
    };
    for (const auto& entry : entries) {
        auto* sub = app.add_subcommand(entry.name, entry.help);
        sub->callback([&config, command = entry.command] { config.command = command; });
        switch (entry.command) {
            case Command::BoundDkw:
            case Command::BoundExact:
            case Command::SamePeriod:
                add_common(sub, true);
                break;
            case Command::Combine:
                add_common(sub, true);
                sub->add_option("--method", config.method, "dkw or exact")
                    ->transform(CLI::CheckedTransformer(methods))
                    ->option_text("dkw|exact");
                sub->add_option("--combiner", config.combiner, "conv, union or both")
                    ->transform(CLI::CheckedTransformer(combiners))
                    ->option_text("conv|union|both");
                break;
            case Command::BurstForEps:
                add_common(sub, false);
                sub->add_option("--eps", config.eps, "Violation probability in (0,1)");
                sub->add_option("--n-min", config.n_min, "Sweep start (without --scenario)");
                sub->add_option("--n-max", config.n_max, "Sweep end");
                sub->add_option("--n-step", config.n_step, "Sweep step");
                sub->add_option("--packet-size", config.packet_size, "Packet size for the sweep, e.g. 1 or 3/2");
                sub->add_option("--exact-max-n", config.exact_max_n, "Largest n for the exact column");
                break;
            case Command::Simulate:
                add_common(sub, true);
                add_simulation(sub);
                break;
            case Command::Figure:
                sub->add_option("--panel", config.panel, "1a, 1b, 2a, 2b or all");
                sub->add_option("--out-dir", config.out_dir, "Directory for fig*.csv / fig*.json");
                sub->add_option("--format", config.format, "csv or json")
                    ->transform(CLI::CheckedTransformer(formats))
                    ->option_text("csv|json");
                sub->add_option("--method", config.method, "Per-group method in panel 2b")
                    ->transform(CLI::CheckedTransformer(methods))
                    ->option_text("dkw|exact");
                sub->add_option("--n-max", config.n_max, "Largest n in panel 1b");
                sub->add_option("--exact-max-n", config.exact_max_n, "Largest n for the exact column of panel 1b");
                sub->add_option("--fig2a-flows", config.fig2a_flows, "Total flows in panel 2a");
                add_simulation(sub);
                break;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    config.grid.b_min = b_min;
    config.grid.b_max = b_max;
    return qdburst::cli::run(config, std::cout, std::cerr);
}
