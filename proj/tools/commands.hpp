#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "defeig/pencil_io.hpp"
#include "defeig/randomize.hpp"
#include "defeig/solver.hpp"

namespace defeig::cli {

const char* version();

/// Decimal or 0x-prefixed hexadecimal seed.
std::uint64_t parse_seed(const std::string& text);
std::vector<double> parse_list(const std::string& text);

struct GenOptions {
  int n = 0;
  std::vector<double> eigs;  ///< empty with preset set
  std::string preset;        ///< "" or "fig3"
  double cond_target = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  NumberFormat format = NumberFormat::kHex;
};

struct SolveOptions {
  std::string pencil;
  double xi = 1e-6;
  std::optional<double> gamma_lb;
  SolverMode mode = SolverMode::kPractical;
  PerturbationKind kind = PerturbationKind::kGue;
  PracticalOverrides practical;
  int grid_log2 = 20;
  bool reuse_probe = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;  ///< RunRecord JSON; X goes to <out>.x
};

struct ShatterOptions {
  std::string pencil;     ///< empty with noise_n > 0
  int noise_n = 0;        ///< pure-noise mode: A = B = 0 of this size
  double mu = 0.0;
  PerturbationKind kind = PerturbationKind::kGue;
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<double> omega;    ///< default 10 mu
  std::optional<double> epsilon;  ///< default mu / 10
  bool fit_offset = false;  ///< oracle-informed grid offset instead of a random one
  std::string out;
};

struct PseudospecOptions {
  std::string pencil;
  double eps = 0.0;
  double lo = -1.0;
  double hi = 1.0;
  int samples = 101;
  std::optional<double> gamma_lb;
  std::string out;
};

struct VerifyOptions {
  std::string pencil;
  std::string record;  ///< RunRecord JSON from solve
  std::string out;
};

struct BenchOptions {
  std::vector<int> n_list;
  int trials = 1;
  std::uint64_t seed = 0;
  double xi = 1e-6;
  std::string out;
};

/// Each command returns the process exit code and writes its outputs; errors
/// are reported on `err` (and as a JSON body where the command emits JSON).
int cmd_gen(const GenOptions& o, const std::string& cmdline, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& o, const std::string& cmdline, std::ostream& out,
              std::ostream& err);
int cmd_shatter(const ShatterOptions& o, const std::string& cmdline, std::ostream& out,
                std::ostream& err);
int cmd_pseudospec(const PseudospecOptions& o, const std::string& cmdline, std::ostream& out,
                   std::ostream& err);
int cmd_verify(const VerifyOptions& o, const std::string& cmdline, std::ostream& out,
               std::ostream& err);
int cmd_bench(const BenchOptions& o, const std::string& cmdline, std::ostream& out,
              std::ostream& err);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace defeig::cli
