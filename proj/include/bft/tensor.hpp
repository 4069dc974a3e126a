#pragma once

#include <cstddef>
#include <vector>

namespace bft {

// An n x h x w activation tensor, channel-major: data[c*h*w + y*w + x].
// The matrix view has shape n x (h*w); column j is spatial site
// (j / w, j % w), so the underlying buffer is shared byte-for-byte with
// the DenseMatrix view.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int channels, int height, int width);
  FeatureMap(int channels, int height, int width, std::vector<double> values);

  int spatial_size() const { return height * width; }

  double& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

// Row-major dense matrix of doubles.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int rows, int cols);
  DenseMatrix(int rows, int cols, std::vector<double> values);

  static DenseMatrix identity(int n);

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

// Bijective reshape between the tensor and its n x (h*w) matrix view.
DenseMatrix reshape_to_matrix(const FeatureMap& x);
FeatureMap reshape_from_matrix(const DenseMatrix& m, int height, int width);

// 1x1 convolution: every spatial column of x is multiplied by w.
// w is n_out x n_in and x must carry n_in channels.
FeatureMap dense_pointwise(const DenseMatrix& w, const FeatureMap& x);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
DenseMatrix transpose(const DenseMatrix& a);

}  // namespace bft
