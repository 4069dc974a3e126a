#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bft/tensor.hpp"

namespace bft {

// Factorization shape of a butterfly transform: channel count n and the
// per-layer radix sequence k_1..k_m with product n. Uniform radix k is
// the common case (m = log_k n); mixed radices cover channel counts that
// are not powers of a single base. Unfactorable n is rejected outright,
// never padded.
struct ButterflySpec {
  int n = 1;
  std::vector<int> radices;

  ButterflySpec() = default;
  ButterflySpec(int n, std::vector<int> radices);

  int layer_count() const { return static_cast<int>(radices.size()); }
  int64_t weight_count() const;

  friend bool operator==(const ButterflySpec&, const ButterflySpec&) = default;
};

// Factor n as k^a * 2^b, preferring the requested base. Throws if n has
// a leftover factor that neither k nor 2 divides.
ButterflySpec make_uniform_spec(int n, int k);

// Exact multiply-accumulate count of one forward pass per spatial
// column: sum over layers of n * k_l. Uniform base k with n = k^m gives
// n*k*m.
int64_t count_flops(const ButterflySpec& spec);

// Geometry of one butterfly layer. Nodes split into blocks of `block`
// consecutive entries; within a block, positions that agree modulo `sub`
// form a complete K_{radix,radix} bipartite group between the layer's
// input and output.
struct LayerGeometry {
  int radix = 1;
  int block = 1;
  int sub = 1;
};

LayerGeometry layer_geometry(const ButterflySpec& spec, int layer);

// Input node feeding branch j of output node `node` at a layer.
inline int partner_node(const LayerGeometry& g, int node, int branch) {
  int b = node / g.block;
  int t = node % g.block % g.sub;
  return b * g.block + branch * g.sub + t;
}

// All diagonal-block edge weights, flat, layer-major then output-node
// then branch index: value(l, u, j) = values[offset(l) + u*k_l + j].
// This order is the serialization order and never changes.
struct ButterflyWeights {
  ButterflySpec spec;
  std::vector<double> values;

  ButterflyWeights() = default;
  explicit ButterflyWeights(ButterflySpec s);
  ButterflyWeights(ButterflySpec s, std::vector<double> vals);

  // D_ii = I, D_ij = 0 at every level; the transform is the identity.
  static ButterflyWeights identity(const ButterflySpec& spec);
  static ButterflyWeights constant(const ButterflySpec& spec, double c);

  int64_t layer_offset(int layer) const;

  double& value(int layer, int node, int branch) {
    return values[layer_offset(layer) +
                  static_cast<int64_t>(node) * spec.radices[layer] + branch];
  }
  double value(int layer, int node, int branch) const {
    return values[layer_offset(layer) +
                  static_cast<int64_t>(node) * spec.radices[layer] + branch];
  }
};

// Divide-and-conquer forward pass; base case n == 1 returns the input.
std::vector<double> forward_recursive(const ButterflyWeights& wts,
                                      const std::vector<double>& x);

// Iterative forward pass over an n x (h*w) matrix: m sparse layer
// applications, in place, no nonlinearity between layers.
void forward_layered_inplace(const ButterflyWeights& wts, DenseMatrix& x);
DenseMatrix forward_layered(const ButterflyWeights& wts, const DenseMatrix& x);

// One sparse layer applied in place; groups are disjoint so only a
// radix-sized scratch is needed.
void apply_layer_inplace(const ButterflyWeights& wts, int layer,
                         DenseMatrix& x);

// Dense n x n matrix of the transform. Entry (v, u) is the product of
// the edge weights on the unique path from input u to output v, equal to
// the ordered product of the m sparse layer matrices.
DenseMatrix materialize(const ButterflyWeights& wts);

// Sparse layer `layer` as a dense matrix (used by materialize; exposed
// for inspection).
DenseMatrix layer_matrix(const ButterflyWeights& wts, int layer);

enum class ResidualPolicy { None, EveryOtherLayer, FirstToLast };
enum class OutputActivation { None, Relu, Sigmoid };

// Skip connections as (start, end) layer spans: the input of layer
// `start` is added to the output of layer `end`. FirstToLast spans the
// whole transform. EveryOtherLayer pairs consecutive layers (0,1),
// (2,3), ..; a trailing unpaired layer gets a skip around itself.
std::vector<std::pair<int, int>> residual_spans(ResidualPolicy policy,
                                                int layer_count);

// Forward pass with residual adds applied per policy.
DenseMatrix transform_with_residual(const ButterflyWeights& wts,
                                    const DenseMatrix& x,
                                    ResidualPolicy policy);

// Inference-mode per-channel affine; the batch-norm form applied once at
// the end of the transform.
struct ChannelAffine {
  std::vector<double> scale;
  std::vector<double> shift;
};

// Whole fusion block: layered forward on the matrix view, residual add
// per policy, then optional batch-norm affine and activation at the end.
// Butterfly layers themselves never carry an activation.
FeatureMap apply_bft_block(
    const ButterflyWeights& wts, const FeatureMap& x,
    ResidualPolicy residual = ResidualPolicy::None,
    const std::optional<ChannelAffine>& batchnorm = std::nullopt,
    OutputActivation activation = OutputActivation::None);

}  // namespace bft
