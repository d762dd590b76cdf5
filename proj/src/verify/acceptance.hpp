#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twg::verify {

struct Config {
  std::uint64_t seed = 7;
  // Desk configuration shared by the STFT, frame and Gabor-norm criteria.
  double length = 16.0;
  long long samples = 256;
  std::string window = "gaussian";  // gaussian | hat | bspline
  std::string lattice = "diag:0.5,0.5";
};

/// key = value lines; '#' starts a comment. Unknown keys are an error.
Config parse_config(std::istream& is);

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriteria = 12;

/// Runs one criterion; exceptions become failures with the message as detail.
Result run_criterion(int id, const Config& cfg);
std::vector<Result> run_all(const Config& cfg);

/// "criterion <id> [PASS|FAIL] <name>: <detail>"
std::string format(const Result& r);

}  // namespace twg::verify
