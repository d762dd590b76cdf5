#include "twistgabor/signal_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace twg {

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace {

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw InvalidArgument("read_binary: truncated input");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_binary(std::ostream& os, const SampledSignal& f) {
  const Grid& g = f.grid();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  for (int j = 0; j < g.dim(); ++j) put<double>(os, g.length(j));
  for (int j = 0; j < g.dim(); ++j) put<std::uint64_t>(os, static_cast<std::uint64_t>(g.count(j)));
  for (Index k = 0; k < f.size(); ++k) {
    put<double>(os, f[k].real());
    put<double>(os, f[k].imag());
  }
}

SampledSignal read_binary(std::istream& is) {
  const auto n = get<std::uint32_t>(is);
  if (n < 1 || n > static_cast<std::uint32_t>(kMaxGridDim)) {
    throw InvalidArgument("read_binary: bad dimension " + std::to_string(n));
  }
  std::vector<double> lengths(n);
  std::vector<Index> counts(n);
  for (auto& l : lengths) l = get<double>(is);
  for (auto& m : counts) m = static_cast<Index>(get<std::uint64_t>(is));
  Grid grid(lengths, counts);
  Eigen::VectorXcd v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v[k] = Complex(re, im);
  }
  return SampledSignal(std::move(grid), std::move(v));
}

void save_binary(const std::string& path, const SampledSignal& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  write_binary(os, f);
}

SampledSignal load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path);
  return read_binary(is);
}

void write_csv(std::ostream& os, const SampledSignal& f) {
  const Grid& g = f.grid();
  os << "index";
  for (int j = 0; j < g.dim(); ++j) os << ",x_" << j;
  os << ",re,im\n";
  for (Index k = 0; k < f.size(); ++k) {
    os << k;
    const Eigen::VectorXd x = g.point(k);
    for (int j = 0; j < g.dim(); ++j) os << ',' << format_double(x[j]);
    os << ',' << format_double(f[k].real()) << ',' << format_double(f[k].imag()) << '\n';
  }
}

}  // namespace twg
