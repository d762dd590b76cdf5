#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace twg {

using Index = std::int64_t;
using Complex = std::complex<double>;

// Unnormalized separable DFT over a row-major array.
//
// `dims` are the sizes of all axes of `data`; the transform is applied along
// axes [first_axis, first_axis + num_axes). forward uses e^{-2 pi i k m / M},
// backward uses e^{+2 pi i k m / M}; neither direction scales.
void dft_axes(Eigen::Ref<Eigen::VectorXcd> data, std::span<const Index> dims,
              int first_axis, int num_axes, bool forward);

inline void dft(Eigen::Ref<Eigen::VectorXcd> data, std::span<const Index> dims,
                bool forward) {
  dft_axes(data, dims, 0, static_cast<int>(dims.size()), forward);
}

}  // namespace twg
