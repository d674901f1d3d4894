#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace heisadams::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kConvergenceFailure = 3,
  kHypothesisFailure = 4,
};

/// Resolved run configuration; every field is echoed in the manifest.
struct RunConfig {
  std::string command;
  std::size_t grid = 17;
  double extent = 1.0;
  double a = 1.0;
  std::string nl = "cubic";
  double lambda_factor = 0.9;  // critical model: lambda = factor * Lambda
  double alpha0 = 1.0;
  double tol = 1e-6;
  std::string out = "heisadams-out";
  std::uint64_t seed = 1;
  std::string betas = "0.75T,1T,1.25T";
  std::string ks = "2,4,8,16,32";
  double ell = 0.5;
  int nmax = 6;
  std::uint64_t samples = 200000;
  std::size_t pairs = 200;
  std::size_t max_iterations = 5000;
  std::string reading = "squared";
  std::string artifact;
};

/// "0.9A" multiplies A, "1.25T" multiplies the threshold A(1 - a/4); plain
/// numbers are taken as is.
std::vector<double> parse_betas(const std::string& text, double a);
/// Comma list of integers and inclusive ranges "lo..hi".
std::vector<int> parse_ks(const std::string& text);

/// Executes a validated configuration and writes artifacts under cfg.out.
int run(const RunConfig& cfg, std::ostream& log);

/// Parses argv (subcommand, flags, optional key=value config file) and runs.
int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace heisadams::cli
