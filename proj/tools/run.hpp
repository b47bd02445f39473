#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdburst/heterogeneous.hpp"

namespace qdburst::cli {

enum class Command { BoundDkw, BoundExact, BurstForEps, SamePeriod, Combine, Simulate, Figure };
enum class OutputFormat { Csv, Json };
enum class Combiner { Conv, Union, Both };

// Burst grid in quanta; unset ends default to 0 and l^tot.
struct GridSpec {
    std::optional<std::int64_t> b_min;
    std::optional<std::int64_t> b_max;
    std::int64_t step = 1;
};

struct RunConfig {
    Command command = Command::BoundDkw;
    std::string scenario_path;
    GridSpec grid;
    BoundMethod method = BoundMethod::Dkw;
    Combiner combiner = Combiner::Both;
    OutputFormat format = OutputFormat::Csv;
    std::string output_path;  // empty: stdout
    bool exact_output = false;

    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    double alpha = 0.01;
    unsigned threads = 1;

    // burst-for-eps
    double eps = 1e-7;
    std::int64_t n_min = 2;
    std::int64_t n_max = 3000;
    std::int64_t n_step = 1;
    std::string packet_size = "1";
    std::int64_t exact_max_n = 200;

    // figure
    std::string panel = "all";
    std::string out_dir = ".";
    std::int64_t fig2a_flows = 1000;
};

// Column order of every curve table; absent columns are omitted.
inline const std::vector<std::string> kCurveColumns = {"b",        "eps_dkw",   "eps_exact", "eps_conv",
                                                       "eps_union", "tail_emp", "band"};

// Executes one command. Returns the process exit status: 0 on success, 1 on
// invalid input (error JSON on `err`), 2 on I/O failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Thread count from QDBURST_THREADS, or 1.
unsigned threads_from_env();

}  // namespace qdburst::cli
