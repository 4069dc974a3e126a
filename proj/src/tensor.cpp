#include "bft/tensor.hpp"

#include <stdexcept>
#include <string>

namespace bft {

namespace {

void require_positive(int value, const char* name) {
  if (value <= 0) {
    throw std::invalid_argument(std::string(name) + " must be positive, got " +
                                std::to_string(value));
  }
}

}  // namespace

FeatureMap::FeatureMap(int channels, int height, int width)
    : channels(channels), height(height), width(width) {
  require_positive(channels, "channels");
  require_positive(height, "height");
  require_positive(width, "width");
  data.assign(static_cast<size_t>(channels) * height * width, 0.0);
}

FeatureMap::FeatureMap(int channels, int height, int width,
                       std::vector<double> values)
    : channels(channels), height(height), width(width), data(std::move(values)) {
  require_positive(channels, "channels");
  require_positive(height, "height");
  require_positive(width, "width");
  size_t expected = static_cast<size_t>(channels) * height * width;
  if (data.size() != expected) {
    throw std::invalid_argument(
        "FeatureMap data length " + std::to_string(data.size()) +
        " does not match " + std::to_string(channels) + "x" +
        std::to_string(height) + "x" + std::to_string(width));
  }
}

DenseMatrix::DenseMatrix(int rows, int cols) : rows(rows), cols(cols) {
  require_positive(rows, "rows");
  require_positive(cols, "cols");
  data.assign(static_cast<size_t>(rows) * cols, 0.0);
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> values)
    : rows(rows), cols(cols), data(std::move(values)) {
  require_positive(rows, "rows");
  require_positive(cols, "cols");
  size_t expected = static_cast<size_t>(rows) * cols;
  if (data.size() != expected) {
    throw std::invalid_argument("DenseMatrix data length " +
                                std::to_string(data.size()) +
                                " does not match " + std::to_string(rows) +
                                "x" + std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix reshape_to_matrix(const FeatureMap& x) {
  // Channel-major storage is already the row-major n x (h*w) layout.
  return DenseMatrix(x.channels, x.spatial_size(), x.data);
}

FeatureMap reshape_from_matrix(const DenseMatrix& m, int height, int width) {
  if (m.cols != height * width) {
    throw std::invalid_argument(
        "matrix with " + std::to_string(m.cols) +
        " columns cannot be reshaped to spatial size " +
        std::to_string(height) + "x" + std::to_string(width));
  }
  return FeatureMap(m.rows, height, width, m.data);
}

FeatureMap dense_pointwise(const DenseMatrix& w, const FeatureMap& x) {
  if (w.cols != x.channels) {
    throw std::invalid_argument(
        "dense_pointwise: weight is " + std::to_string(w.rows) + "x" +
        std::to_string(w.cols) + " but input has " +
        std::to_string(x.channels) + " channels");
  }
  int hw = x.spatial_size();
  FeatureMap y(w.rows, x.height, x.width);
  for (int o = 0; o < w.rows; ++o) {
    double* out_row = &y.data[static_cast<size_t>(o) * hw];
    for (int i = 0; i < w.cols; ++i) {
      double wv = w.at(o, i);
      if (wv == 0.0) continue;
      const double* in_row = &x.data[static_cast<size_t>(i) * hw];
      for (int j = 0; j < hw; ++j) out_row[j] += wv * in_row[j];
    }
  }
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) {
    throw std::invalid_argument("matmul: " + std::to_string(a.rows) + "x" +
                                std::to_string(a.cols) + " times " +
                                std::to_string(b.rows) + "x" +
                                std::to_string(b.cols));
  }
  DenseMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      double av = a.at(i, k);
      if (av == 0.0) continue;
      const double* brow = &b.data[static_cast<size_t>(k) * b.cols];
      double* crow = &c.data[static_cast<size_t>(i) * c.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  if (a.cols != static_cast<int>(x.size())) {
    throw std::invalid_argument("matvec: matrix is " + std::to_string(a.rows) +
                                "x" + std::to_string(a.cols) +
                                " but vector has length " +
                                std::to_string(x.size()));
  }
  std::vector<double> y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    const double* row = &a.data[static_cast<size_t>(i) * a.cols];
    for (int j = 0; j < a.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

}  // namespace bft
