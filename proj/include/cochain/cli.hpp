#pragma once

// Command implementations behind the `cochain` tool. Each returns the exit
// status: 0 success, 1 malformed input, 2 fuel timeout, 3 verification failure.

#include "cochain/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cochain::cli {

struct RunConfig {
  std::string space;         // empty: taken from the set/witness
  std::string shape;         // builtin shape name
  std::string set_file;      // JSON set definition
  std::string witness_file;  // JSON witness; builtin witness when empty
  std::optional<unsigned> k;
  unsigned fuel = 64;
  unsigned jobs = 0;  // 0: OpenMP default
  std::uint64_t rng_seed = 0;
  std::string out;  // empty: stdout
  std::vector<std::size_t> m_schedule = SearchOptions::default_m_schedule();
  std::vector<std::size_t> subdivision_schedule = {1, 2, 3};
};

/// Applies --jobs: caps OpenMP threads, and 1 selects the serial kernels.
void apply_jobs(unsigned jobs);

int cmd_approximate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err);

struct PlotData {
  std::string csv;
  io::json exact;  // the same rows with exact rationals
};

/// Ball rows followed by `samples` points of the set (when it has an exact shape).
PlotData plot_data(const io::json& document, std::size_t samples = 720);

/// Writes CSV to `out_path` (stdout when empty) and the exact rows next to it:
/// <out_path>.json for a file, <input>.plot.json otherwise.
int cmd_plot_data(const std::string& input, const std::string& out_path, std::ostream& out, std::ostream& err);

/// Full command line front end (parses argv with CLI11).
int run(int argc, char** argv);

}  // namespace cochain::cli
