#pragma once

#include <functional>
#include <vector>

#include "bft/butterfly.hpp"

namespace bft {

// Per-layer cached inputs from one forward pass. Inputs (not outputs)
// are cached so each weight gradient is a single multiply per edge per
// column. A tape belongs to exactly one forward call.
struct GradTape {
  ButterflySpec spec;
  ResidualPolicy residual = ResidualPolicy::None;
  int cols = 0;
  std::vector<DenseMatrix> layer_inputs;
};

// Forward pass that records the tape; result matches
// transform_with_residual exactly.
DenseMatrix forward_with_tape(const ButterflyWeights& wts,
                              const DenseMatrix& x, GradTape& tape,
                              ResidualPolicy residual = ResidualPolicy::None);

struct BackwardResult {
  DenseMatrix dx;
  std::vector<double> dweights;
};

// Reverse-mode pass: dx = B^T dy by linearity; each weight gradient is
// the upstream cotangent at the edge head times the cached activation at
// its tail, summed over columns.
BackwardResult backward(const ButterflyWeights& wts, const GradTape& tape,
                        const DenseMatrix& dy);

// Scalar loss over the transform output, with its gradient.
struct ScalarLoss {
  std::function<double(const DenseMatrix&)> value;
  std::function<DenseMatrix(const DenseMatrix&)> grad;
};

// Max over all weights and input entries of
// |analytic - central difference| / max(1, |analytic|).
double finite_diff_check(const ButterflyWeights& wts, const DenseMatrix& x,
                         const ScalarLoss& loss, double step,
                         ResidualPolicy residual = ResidualPolicy::None);

}  // namespace bft
