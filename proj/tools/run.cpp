#include "run.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qdburst/errors.hpp"
#include "qdburst/homogeneous.hpp"
#include "qdburst/simulator.hpp"

namespace qdburst::cli {

namespace {

using nlohmann::json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_number_float()) return fmt::format("{:.12g}", cell.get<double>());
    if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
    if (cell.is_string()) return cell.get<std::string>();
    return cell.dump();
}

std::string render(const Table& table, OutputFormat format) {
    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
            os << '\n';
        }
        return os.str();
    }
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            // 12 significant digits, same as CSV.
            obj[table.columns[c]] = row[c].is_number_float() ? json::parse(csv_cell(row[c])) : row[c];
        }
        rows.push_back(std::move(obj));
    }
    os << json{{"columns", table.columns}, {"rows", rows}}.dump(2) << '\n';
    return os.str();
}

void emit(const Table& table, const RunConfig& config, const std::string& path, std::ostream& out) {
    const std::string text = render(table, config.format);
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    file << text;
    if (!file) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

json probability_cell(const Rational& value, bool exact_output) {
    if (exact_output) return format_rational(value);
    return to_double(value);
}

json burst_cell(const Rational& value, bool exact_output) {
    if (value.get_den() == 1 && value.get_num().fits_slong_p()) return static_cast<std::int64_t>(value.get_num().get_si());
    if (exact_output) return format_rational(value);
    return to_double(value);
}

Scenario load_scenario(const std::string& path) {
    if (path.empty()) fail(ErrorKind::InvalidArg, "--scenario is required for this command");
    std::ifstream file(path);
    if (!file) fail(ErrorKind::Io, "cannot read scenario '" + path + "'");
    json doc;
    try {
        doc = json::parse(file);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidSpec, std::string("malformed scenario JSON: ") + e.what());
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("malformed scenario JSON: ") + e.what());
    }
    try {
        return validate_scenario(scenario_from_json(doc));
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("bad scenario field: ") + e.what());
    }
}

// Grid indices (quanta) selected by the config, clipped to [0, upper].
std::vector<std::int64_t> grid_indices(const GridSpec& grid, std::int64_t upper) {
    const std::int64_t lo = grid.b_min.value_or(0);
    const std::int64_t hi = std::min(grid.b_max.value_or(upper), upper);
    if (grid.step < 1) fail(ErrorKind::InvalidArg, "grid step must be >= 1");
    if (lo < 0 || lo > hi) fail(ErrorKind::InvalidArg, "grid must satisfy 0 <= b_min <= b_max");
    std::vector<std::int64_t> out;
    for (std::int64_t k = lo; k <= hi; k += grid.step) out.push_back(k);
    return out;
}

template <class T>
T value_at(const BasicTailCurve<T>& curve, std::int64_t k) {
    // Curves are 0 past their last grid point.
    if (k >= static_cast<std::int64_t>(curve.size())) return T(0);
    return curve.eps[static_cast<std::size_t>(k)];
}

void warn_trivial_regions(const Scenario& scenario, std::ostream& err) {
    for (std::size_t i = 0; i < scenario.groups().size(); ++i) {
        const auto& g = scenario.groups()[i];
        if (g.count < 2) continue;
        const double threshold =
            1.0 - 1.0 / g.count + std::sqrt((static_cast<double>(g.count) - 1.0) * std::log(2.0) / 2.0);
        err << fmt::format("warning: group {}: DKW bound is trivial (>= 1) below {} packets\n", i,
                           static_cast<std::int64_t>(std::ceil(threshold)));
    }
}

std::vector<GroupBound> group_bounds(const Scenario& scenario, BoundMethod method) {
    std::vector<GroupBound> out;
    for (const auto& g : scenario.groups()) out.push_back(build_group_bound(g, scenario.quantum(), method));
    return out;
}

std::vector<ExactGroupBound> exact_group_bounds(const Scenario& scenario) {
    std::vector<ExactGroupBound> out;
    for (const auto& g : scenario.groups()) out.push_back(build_exact_group_bound(g, scenario.quantum()));
    return out;
}

Table bound_table(const Scenario& scenario, BoundMethod method, const RunConfig& config, std::ostream& err) {
    const std::string column = method == BoundMethod::Dkw ? "eps_dkw" : "eps_exact";
    Table table{{"b", column}, {}};
    const auto indices = grid_indices(config.grid, scenario.total_burst_quanta());
    if (method == BoundMethod::Dkw) warn_trivial_regions(scenario, err);
    if (method == BoundMethod::Exact && config.exact_output) {
        const auto bounds = exact_group_bounds(scenario);
        const auto curve = convolve_groups<Rational>(bounds);
        for (const auto k : indices) {
            table.rows.push_back({burst_cell(scenario.quantum() * k, true), probability_cell(value_at(curve, k), true)});
        }
        return table;
    }
    const auto bounds = group_bounds(scenario, method);
    const auto curve = convolve_groups<double>(bounds);
    for (const auto k : indices) {
        table.rows.push_back({burst_cell(scenario.quantum() * k, config.exact_output), value_at(curve, k)});
    }
    return table;
}

Table combine_table(const Scenario& scenario, const RunConfig& config) {
    Table table{{"b"}, {}};
    const bool conv = config.combiner != Combiner::Union;
    const bool uni = config.combiner != Combiner::Conv;
    if (conv) table.columns.push_back("eps_conv");
    if (uni) table.columns.push_back("eps_union");
    const auto indices = grid_indices(config.grid, scenario.total_burst_quanta());

    if (config.method == BoundMethod::Exact && config.exact_output) {
        const auto bounds = exact_group_bounds(scenario);
        const auto c = conv ? convolve_groups<Rational>(bounds) : ExactTailCurve{};
        const auto u = uni ? union_bound_combine<Rational>(bounds) : ExactTailCurve{};
        for (const auto k : indices) {
            std::vector<json> row{burst_cell(scenario.quantum() * k, true)};
            if (conv) row.push_back(probability_cell(value_at(c, k), true));
            if (uni) row.push_back(probability_cell(value_at(u, k), true));
            table.rows.push_back(std::move(row));
        }
        return table;
    }
    const auto bounds = group_bounds(scenario, config.method);
    const auto c = conv ? convolve_groups<double>(bounds) : TailBoundCurve{};
    const auto u = uni ? union_bound_combine<double>(bounds) : TailBoundCurve{};
    for (const auto k : indices) {
        std::vector<json> row{burst_cell(scenario.quantum() * k, config.exact_output)};
        if (conv) row.push_back(value_at(c, k));
        if (uni) row.push_back(value_at(u, k));
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<Rational> same_period_sizes(const Scenario& scenario) {
    const auto& groups = scenario.groups();
    for (const auto& g : groups) {
        if (g.period != groups.front().period) fail(ErrorKind::InvalidSpec, "same-period needs one common period");
    }
    std::vector<Rational> sizes;
    for (const auto& g : groups) {
        for (std::int64_t f = 0; f < g.count; ++f) sizes.push_back(g.packet_size);
    }
    std::sort(sizes.begin(), sizes.end(), [](const Rational& a, const Rational& b) { return a > b; });
    if (sizes.size() < 2) fail(ErrorKind::InvalidSpec, "same-period needs at least two flows");
    return sizes;
}

Table same_period_table(const Scenario& scenario, const RunConfig& config) {
    const auto sizes = same_period_sizes(scenario);
    Table table{{"b", "eps_dkw", "eps_exact"}, {}};
    for (const auto k : grid_indices(config.grid, scenario.total_burst_quanta())) {
        const Rational b = scenario.quantum() * k;
        table.rows.push_back({burst_cell(b, config.exact_output), same_period_dkw(sizes, b),
                              probability_cell(same_period_exact(sizes, b), config.exact_output)});
    }
    return table;
}

Table burst_table(const RunConfig& config) {
    Table table{{"n", "b_dkw", "b_exact", "b_det"}, {}};
    if (!config.scenario_path.empty()) {
        const auto scenario = load_scenario(config.scenario_path);
        if (scenario.groups().size() == 1) {
            const auto& g = scenario.groups().front();
            json exact = nullptr;
            if (g.count <= config.exact_max_n) {
                exact = burst_cell(exact_quasi_det_burst(g.count, g.packet_size, config.eps), config.exact_output);
            }
            table.rows.push_back({g.count, burst_cell(quasi_det_burst(g.count, g.packet_size, config.eps), config.exact_output),
                                  exact, burst_cell(g.burst(), config.exact_output)});
        } else {
            const auto sizes = same_period_sizes(scenario);
            table.rows.push_back({static_cast<std::int64_t>(sizes.size()),
                                  burst_cell(same_period_burst(sizes, config.eps), config.exact_output), nullptr,
                                  burst_cell(scenario.total_burst(), config.exact_output)});
        }
        return table;
    }
    const Rational packet = parse_rational(config.packet_size);
    if (sgn(packet) <= 0) fail(ErrorKind::InvalidArg, "packet size must be > 0");
    if (config.n_min < 1 || config.n_min > config.n_max || config.n_step < 1) {
        fail(ErrorKind::InvalidArg, "need 1 <= n_min <= n_max and n_step >= 1");
    }
    for (std::int64_t n = config.n_min; n <= config.n_max; n += config.n_step) {
        json exact = nullptr;
        if (n <= config.exact_max_n) exact = burst_cell(exact_quasi_det_burst(n, packet, config.eps), config.exact_output);
        table.rows.push_back({n, burst_cell(quasi_det_burst(n, packet, config.eps), config.exact_output), exact,
                              burst_cell(packet * n, config.exact_output)});
    }
    return table;
}

MonteCarloOptions mc_options(const RunConfig& config) {
    MonteCarloOptions options;
    options.alpha = config.alpha;
    options.threads = config.threads;
    return options;
}

Table simulate_table(const Scenario& scenario, const RunConfig& config, std::ostream& err) {
    if (config.trials < 1) fail(ErrorKind::InvalidArg, "trials must be >= 1");
    const auto indices = grid_indices(config.grid, scenario.total_burst_quanta());
    std::vector<double> grid;
    for (const auto k : indices) grid.push_back(to_double(scenario.quantum() * k));
    const auto tail = monte_carlo_tail(scenario, config.trials, config.seed, grid, mc_options(config));
    if (config.trials < 1000) err << "warning: fewer than 1000 trials; tail estimates are coarse\n";
    Table table{{"b", "tail_emp", "band"}, {}};
    for (std::size_t i = 0; i < indices.size(); ++i) {
        table.rows.push_back({burst_cell(scenario.quantum() * indices[i], config.exact_output), tail.tail[i],
                              tail.band_halfwidth});
    }
    return table;
}

// Fig. 1a: homogeneous 250 flows, both analytic bounds and simulation.
Table figure_1a(const RunConfig& config) {
    const auto scenario = unit_homogeneous_scenario(250);
    const std::int64_t n = 250;
    std::vector<double> grid;
    for (std::int64_t b = 0; b <= n; ++b) grid.push_back(static_cast<double>(b));
    const auto tail = monte_carlo_tail(scenario, config.trials, config.seed, grid, mc_options(config));
    Table table{{"b", "eps_dkw", "eps_exact", "tail_emp", "band"}, {}};
    for (std::int64_t b = 0; b <= n; ++b) {
        table.rows.push_back({b, dkw_tail_bound(n, 1, b), to_double(exact_tail_bound(n, 1, b)),
                              tail.tail[static_cast<std::size_t>(b)], tail.band_halfwidth});
    }
    return table;
}

// Fig. 1b: quasi-deterministic burst at eps = 1e-7 versus n.
Table figure_1b(const RunConfig& config) {
    RunConfig sweep = config;
    sweep.scenario_path.clear();
    sweep.eps = 1e-7;
    return burst_table(sweep);
}

// Fig. 2a: convolution versus union bound for g equal groups.
Table figure_2a(const RunConfig& config) {
    Table table{{"g", "b", "eps_conv", "eps_union"}, {}};
    for (const std::int64_t g : {1, 2, 4, 5, 8}) {
        if (config.fig2a_flows % g != 0) continue;
        const FlowGroupSpec group{config.fig2a_flows / g, Rational(1), Rational(1)};
        const auto bound = build_group_bound(group, Rational(1), BoundMethod::Dkw);
        const std::vector<GroupBound> bounds(static_cast<std::size_t>(g), bound);
        const auto c = convolve_groups<double>(bounds);
        const auto u = union_bound_combine<double>(bounds);
        for (std::int64_t b = 0; b <= config.fig2a_flows; ++b) {
            table.rows.push_back({g, b, value_at(c, b), value_at(u, b)});
        }
    }
    return table;
}

// Fig. 2b: per-size groups combined by convolution versus the same-period
// bounds on the whole population.
Table figure_2b(const RunConfig& config) {
    Table table{{"config", "b", "eps_conv", "eps_same_period_dkw", "eps_same_period_exact"}, {}};
    for (const auto& [groups, per_group] : {std::pair<std::int64_t, std::int64_t>{10, 10}, {5, 20}}) {
        std::vector<GroupBound> bounds;
        std::vector<Rational> sizes;
        for (std::int64_t s = groups; s >= 1; --s) {
            bounds.push_back(build_group_bound({per_group, Rational(1), Rational(s)}, Rational(1), config.method));
            for (std::int64_t f = 0; f < per_group; ++f) sizes.emplace_back(s);
        }
        const auto c = convolve_groups<double>(bounds);
        const std::int64_t total = per_group * groups * (groups + 1) / 2;
        const std::string name = fmt::format("{}x{}", groups, per_group);
        for (std::int64_t b = 0; b <= total; ++b) {
            table.rows.push_back({name, b, value_at(c, b), same_period_dkw(sizes, b),
                                  to_double(same_period_exact(sizes, b))});
        }
    }
    return table;
}

void run_figures(const RunConfig& config, std::ostream& err) {
    const std::string ext = config.format == OutputFormat::Csv ? ".csv" : ".json";
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + config.out_dir + "': " + ec.message());
    const std::map<std::string, Table (*)(const RunConfig&)> panels = {
        {"1a", figure_1a}, {"1b", figure_1b}, {"2a", figure_2a}, {"2b", figure_2b}};
    if (config.panel != "all" && !panels.contains(config.panel)) {
        fail(ErrorKind::InvalidArg, "unknown figure panel '" + config.panel + "'");
    }
    for (const auto& [name, build] : panels) {
        if (config.panel != "all" && config.panel != name) continue;
        const auto path = (std::filesystem::path(config.out_dir) / ("fig" + name + ext)).string();
        emit(build(config), config, path, err);
        err << "wrote " << path << '\n';
    }
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

unsigned threads_from_env() {
    if (const char* value = std::getenv("QDBURST_THREADS")) {
        const int parsed = std::atoi(value);
        if (parsed > 0) return static_cast<unsigned>(parsed);
    }
    return 1;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case Command::BoundDkw:
            case Command::BoundExact: {
                const auto scenario = load_scenario(config.scenario_path);
                const auto method = config.command == Command::BoundDkw ? BoundMethod::Dkw : BoundMethod::Exact;
                emit(bound_table(scenario, method, config, err), config, config.output_path, out);
                break;
            }
            case Command::BurstForEps:
                emit(burst_table(config), config, config.output_path, out);
                break;
            case Command::SamePeriod:
                emit(same_period_table(load_scenario(config.scenario_path), config), config, config.output_path, out);
                break;
            case Command::Combine:
                emit(combine_table(load_scenario(config.scenario_path), config), config, config.output_path, out);
                break;
            case Command::Simulate: {
                const auto scenario = load_scenario(config.scenario_path);
                emit(simulate_table(scenario, config, err), config, config.output_path, out);
                break;
            }
            case Command::Figure:
                run_figures(config, err);
                break;
        }
    } catch (const Error& e) {
        report_error(err, to_string(e.kind()), e.what());
        return e.kind() == ErrorKind::Io ? 2 : 1;
    }
    return 0;
}

}  // namespace qdburst::cli
