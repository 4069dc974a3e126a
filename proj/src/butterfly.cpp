#include "bft/butterfly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bft {

namespace {

std::string radices_to_string(const std::vector<int>& radices) {
  std::string s = "[";
  for (size_t i = 0; i < radices.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(radices[i]);
  }
  return s + "]";
}

}  // namespace

ButterflySpec::ButterflySpec(int n_, std::vector<int> radices_)
    : n(n_), radices(std::move(radices_)) {
  if (n < 1) {
    throw std::invalid_argument("ButterflySpec: n must be >= 1, got " +
                                std::to_string(n));
  }
  int64_t product = 1;
  for (int k : radices) {
    if (k < 2) {
      throw std::invalid_argument("ButterflySpec: radix must be >= 2, got " +
                                  std::to_string(k));
    }
    product *= k;
    if (product > n) break;
  }
  if (product != n) {
    throw std::invalid_argument("ButterflySpec: radices " +
                                radices_to_string(radices) +
                                " do not factor n=" + std::to_string(n));
  }
}

int64_t ButterflySpec::weight_count() const {
  int64_t total = 0;
  for (int k : radices) total += static_cast<int64_t>(n) * k;
  return total;
}

ButterflySpec make_uniform_spec(int n, int k) {
  if (n < 1) {
    throw std::invalid_argument("make_uniform_spec: n must be >= 1, got " +
                                std::to_string(n));
  }
  if (k < 2) {
    throw std::invalid_argument("make_uniform_spec: base must be >= 2, got " +
                                std::to_string(k));
  }
  std::vector<int> radices;
  int rest = n;
  while (rest % k == 0) {
    radices.push_back(k);
    rest /= k;
  }
  while (rest % 2 == 0) {
    radices.push_back(2);
    rest /= 2;
  }
  if (rest != 1) {
    throw std::invalid_argument(
        "make_uniform_spec: n=" + std::to_string(n) +
        " has factor " + std::to_string(rest) +
        " not divisible by base " + std::to_string(k) + " or 2");
  }
  return ButterflySpec(n, std::move(radices));
}

int64_t count_flops(const ButterflySpec& spec) { return spec.weight_count(); }

LayerGeometry layer_geometry(const ButterflySpec& spec, int layer) {
  LayerGeometry g;
  g.block = spec.n;
  for (int l = 0; l < layer; ++l) g.block /= spec.radices[l];
  g.radix = spec.radices[layer];
  g.sub = g.block / g.radix;
  return g;
}

ButterflyWeights::ButterflyWeights(ButterflySpec s) : spec(std::move(s)) {
  values.assign(static_cast<size_t>(spec.weight_count()), 0.0);
}

ButterflyWeights::ButterflyWeights(ButterflySpec s, std::vector<double> vals)
    : spec(std::move(s)), values(std::move(vals)) {
  if (values.size() != static_cast<size_t>(spec.weight_count())) {
    throw std::invalid_argument(
        "ButterflyWeights: expected " + std::to_string(spec.weight_count()) +
        " values for n=" + std::to_string(spec.n) + " radices " +
        radices_to_string(spec.radices) + ", got " +
        std::to_string(values.size()));
  }
}

ButterflyWeights ButterflyWeights::identity(const ButterflySpec& spec) {
  ButterflyWeights w(spec);
  for (int l = 0; l < spec.layer_count(); ++l) {
    LayerGeometry g = layer_geometry(spec, l);
    for (int u = 0; u < spec.n; ++u) {
      int own_branch = u % g.block / g.sub;
      w.value(l, u, own_branch) = 1.0;
    }
  }
  return w;
}

ButterflyWeights ButterflyWeights::constant(const ButterflySpec& spec,
                                            double c) {
  ButterflyWeights w(spec);
  for (double& v : w.values) v = c;
  return w;
}

int64_t ButterflyWeights::layer_offset(int layer) const {
  int64_t off = 0;
  for (int l = 0; l < layer; ++l)
    off += static_cast<int64_t>(spec.n) * spec.radices[l];
  return off;
}

namespace {

// One level of the divide-and-conquer product. `x` and `out` point at
// `size` entries; `offset` is the global position of this block, needed
// to address weights.
void recurse_forward(const ButterflyWeights& wts, int level, int offset,
                     int size, const double* x, double* out) {
  if (size == 1) {
    out[0] = x[0];
    return;
  }
  int k = wts.spec.radices[level];
  int sub = size / k;
  std::vector<double> y(size);
  for (int i = 0; i < k; ++i) {
    for (int t = 0; t < sub; ++t) {
      int node = offset + i * sub + t;
      double acc = 0.0;
      for (int j = 0; j < k; ++j) {
        acc += wts.value(level, node, j) * x[j * sub + t];
      }
      y[i * sub + t] = acc;
    }
  }
  for (int i = 0; i < k; ++i) {
    recurse_forward(wts, level + 1, offset + i * sub, sub, y.data() + i * sub,
                    out + i * sub);
  }
}

}  // namespace

std::vector<double> forward_recursive(const ButterflyWeights& wts,
                                      const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != wts.spec.n) {
    throw std::invalid_argument(
        "forward_recursive: input length " + std::to_string(x.size()) +
        " does not match n=" + std::to_string(wts.spec.n));
  }
  std::vector<double> out(x.size());
  recurse_forward(wts, 0, 0, wts.spec.n, x.data(), out.data());
  return out;
}

void apply_layer_inplace(const ButterflyWeights& wts, int layer,
                         DenseMatrix& x) {
  LayerGeometry g = layer_geometry(wts.spec, layer);
  int n = wts.spec.n;
  int cols = x.cols;
  int k = g.radix;
  std::vector<double> xs(k), ys(k);
  const double* w = wts.values.data() + wts.layer_offset(layer);
  for (int b = 0; b < n / g.block; ++b) {
    for (int t = 0; t < g.sub; ++t) {
      int base = b * g.block + t;
      for (int c = 0; c < cols; ++c) {
        for (int j = 0; j < k; ++j) {
          xs[j] = x.data[static_cast<size_t>(base + j * g.sub) * cols + c];
        }
        for (int i = 0; i < k; ++i) {
          int node = base + i * g.sub;
          const double* wrow = w + static_cast<int64_t>(node) * k;
          double acc = 0.0;
          for (int j = 0; j < k; ++j) acc += wrow[j] * xs[j];
          ys[i] = acc;
        }
        for (int i = 0; i < k; ++i) {
          x.data[static_cast<size_t>(base + i * g.sub) * cols + c] = ys[i];
        }
      }
    }
  }
}

void forward_layered_inplace(const ButterflyWeights& wts, DenseMatrix& x) {
  if (x.rows != wts.spec.n) {
    throw std::invalid_argument("forward_layered: input has " +
                                std::to_string(x.rows) + " rows, expected n=" +
                                std::to_string(wts.spec.n));
  }
  for (int l = 0; l < wts.spec.layer_count(); ++l) {
    apply_layer_inplace(wts, l, x);
  }
}

DenseMatrix forward_layered(const ButterflyWeights& wts,
                            const DenseMatrix& x) {
  DenseMatrix y = x;
  forward_layered_inplace(wts, y);
  return y;
}

DenseMatrix layer_matrix(const ButterflyWeights& wts, int layer) {
  int n = wts.spec.n;
  LayerGeometry g = layer_geometry(wts.spec, layer);
  DenseMatrix m(n, n);
  for (int u = 0; u < n; ++u) {
    for (int j = 0; j < g.radix; ++j) {
      m.at(u, partner_node(g, u, j)) = wts.value(layer, u, j);
    }
  }
  return m;
}

DenseMatrix materialize(const ButterflyWeights& wts) {
  DenseMatrix acc = DenseMatrix::identity(wts.spec.n);
  for (int l = 0; l < wts.spec.layer_count(); ++l) {
    acc = matmul(layer_matrix(wts, l), acc);
  }
  return acc;
}

std::vector<std::pair<int, int>> residual_spans(ResidualPolicy policy,
                                                int layer_count) {
  std::vector<std::pair<int, int>> spans;
  if (layer_count == 0) return spans;
  switch (policy) {
    case ResidualPolicy::None:
      break;
    case ResidualPolicy::FirstToLast:
      spans.emplace_back(0, layer_count - 1);
      break;
    case ResidualPolicy::EveryOtherLayer:
      for (int l = 0; l + 1 < layer_count; l += 2) spans.emplace_back(l, l + 1);
      if (layer_count % 2 == 1)
        spans.emplace_back(layer_count - 1, layer_count - 1);
      break;
  }
  return spans;
}

DenseMatrix transform_with_residual(const ButterflyWeights& wts,
                                    const DenseMatrix& x,
                                    ResidualPolicy policy) {
  if (x.rows != wts.spec.n) {
    throw std::invalid_argument("transform_with_residual: input has " +
                                std::to_string(x.rows) + " rows, expected n=" +
                                std::to_string(wts.spec.n));
  }
  int m = wts.spec.layer_count();
  auto spans = residual_spans(policy, m);
  DenseMatrix cur = x;
  std::vector<DenseMatrix> saved(spans.size());
  for (int l = 0; l < m; ++l) {
    for (size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].first == l) saved[s] = cur;
    }
    apply_layer_inplace(wts, l, cur);
    for (size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].second == l) {
        for (size_t i = 0; i < cur.data.size(); ++i)
          cur.data[i] += saved[s].data[i];
      }
    }
  }
  return cur;
}

FeatureMap apply_bft_block(const ButterflyWeights& wts, const FeatureMap& x,
                           ResidualPolicy residual,
                           const std::optional<ChannelAffine>& batchnorm,
                           OutputActivation activation) {
  if (x.channels != wts.spec.n) {
    throw std::invalid_argument("apply_bft_block: input has " +
                                std::to_string(x.channels) +
                                " channels, expected n=" +
                                std::to_string(wts.spec.n));
  }
  DenseMatrix y = transform_with_residual(wts, reshape_to_matrix(x), residual);
  if (batchnorm) {
    const ChannelAffine& bn = *batchnorm;
    if (static_cast<int>(bn.scale.size()) != wts.spec.n ||
        static_cast<int>(bn.shift.size()) != wts.spec.n) {
      throw std::invalid_argument(
          "apply_bft_block: batch-norm affine has " +
          std::to_string(bn.scale.size()) + "/" +
          std::to_string(bn.shift.size()) + " channels, expected " +
          std::to_string(wts.spec.n));
    }
    for (int c = 0; c < y.rows; ++c) {
      for (int j = 0; j < y.cols; ++j) {
        y.at(c, j) = bn.scale[c] * y.at(c, j) + bn.shift[c];
      }
    }
  }
  switch (activation) {
    case OutputActivation::None:
      break;
    case OutputActivation::Relu:
      for (double& v : y.data) v = v > 0.0 ? v : 0.0;
      break;
    case OutputActivation::Sigmoid:
      for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
      break;
  }
  return reshape_from_matrix(y, x.height, x.width);
}

}  // namespace bft
