#include "twistgabor/fft.hpp"

#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace twg {

namespace {

Eigen::FFT<double>& engine() {
  // Plans are cached per transform length inside the engine.
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

}  // namespace

void dft_axes(Eigen::Ref<Eigen::VectorXcd> data, std::span<const Index> dims,
              int first_axis, int num_axes, bool forward) {
  const int d = static_cast<int>(dims.size());
  if (first_axis < 0 || num_axes < 0 || first_axis + num_axes > d) {
    throw std::invalid_argument("dft_axes: axis range out of bounds");
  }
  Index total = 1;
  for (Index m : dims) total *= m;
  if (total != data.size()) {
    throw std::invalid_argument("dft_axes: data size does not match dims");
  }

  auto& fft = engine();
  std::vector<Complex> line;
  std::vector<Complex> out;
  for (int axis = first_axis; axis < first_axis + num_axes; ++axis) {
    const Index len = dims[axis];
    if (len == 1) continue;
    Index stride = 1;
    for (int j = axis + 1; j < d; ++j) stride *= dims[j];
    const Index outer = total / (len * stride);
    line.resize(len);
    for (Index o = 0; o < outer; ++o) {
      for (Index s = 0; s < stride; ++s) {
        const Index base = o * len * stride + s;
        for (Index k = 0; k < len; ++k) line[k] = data[base + k * stride];
        if (forward) {
          fft.fwd(out, line);
        } else {
          fft.inv(out, line);
        }
        for (Index k = 0; k < len; ++k) data[base + k * stride] = out[k];
      }
    }
  }
}

}  // namespace twg
