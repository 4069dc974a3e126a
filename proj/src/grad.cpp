#include "bft/grad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bft {

DenseMatrix forward_with_tape(const ButterflyWeights& wts,
                              const DenseMatrix& x, GradTape& tape,
                              ResidualPolicy residual) {
  if (x.rows != wts.spec.n) {
    throw std::invalid_argument("forward_with_tape: input has " +
                                std::to_string(x.rows) + " rows, expected n=" +
                                std::to_string(wts.spec.n));
  }
  int m = wts.spec.layer_count();
  tape.spec = wts.spec;
  tape.residual = residual;
  tape.cols = x.cols;
  tape.layer_inputs.assign(m, DenseMatrix());

  auto spans = residual_spans(residual, m);
  DenseMatrix cur = x;
  for (int l = 0; l < m; ++l) {
    tape.layer_inputs[l] = cur;
    apply_layer_inplace(wts, l, cur);
    for (const auto& span : spans) {
      if (span.second == l) {
        const DenseMatrix& src = tape.layer_inputs[span.first];
        for (size_t i = 0; i < cur.data.size(); ++i)
          cur.data[i] += src.data[i];
      }
    }
  }
  return cur;
}

BackwardResult backward(const ButterflyWeights& wts, const GradTape& tape,
                        const DenseMatrix& dy) {
  int m = wts.spec.layer_count();
  if (tape.spec != wts.spec ||
      static_cast<int>(tape.layer_inputs.size()) != m) {
    throw std::invalid_argument(
        "backward: tape does not belong to these weights");
  }
  if (dy.rows != wts.spec.n || dy.cols != tape.cols) {
    throw std::invalid_argument(
        "backward: upstream gradient is " + std::to_string(dy.rows) + "x" +
        std::to_string(dy.cols) + ", expected " + std::to_string(wts.spec.n) +
        "x" + std::to_string(tape.cols));
  }

  auto spans = residual_spans(tape.residual, m);
  BackwardResult result;
  result.dweights.assign(wts.values.size(), 0.0);

  DenseMatrix g = dy;
  // Gradient contributions waiting to be added at a span's start layer.
  std::vector<DenseMatrix> pending(spans.size());

  for (int l = m - 1; l >= 0; --l) {
    for (size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].second == l) pending[s] = g;
    }
    const DenseMatrix& x = tape.layer_inputs[l];
    LayerGeometry geo = layer_geometry(wts.spec, l);
    int k = geo.radix;
    DenseMatrix gnew(g.rows, g.cols);
    double* dw = result.dweights.data() + wts.layer_offset(l);
    for (int b = 0; b < wts.spec.n / geo.block; ++b) {
      for (int t = 0; t < geo.sub; ++t) {
        int base = b * geo.block + t;
        for (int c = 0; c < g.cols; ++c) {
          for (int i = 0; i < k; ++i) {
            int node = base + i * geo.sub;
            double go = g.at(node, c);
            if (go == 0.0) continue;
            double* dwrow = dw + static_cast<int64_t>(node) * k;
            for (int j = 0; j < k; ++j) {
              dwrow[j] += go * x.at(base + j * geo.sub, c);
            }
          }
          for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) {
              acc += wts.value(l, base + i * geo.sub, j) *
                     g.at(base + i * geo.sub, c);
            }
            gnew.at(base + j * geo.sub, c) = acc;
          }
        }
      }
    }
    g = std::move(gnew);
    for (size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].first == l) {
        for (size_t i = 0; i < g.data.size(); ++i)
          g.data[i] += pending[s].data[i];
      }
    }
  }
  result.dx = std::move(g);
  return result;
}

double finite_diff_check(const ButterflyWeights& wts, const DenseMatrix& x,
                         const ScalarLoss& loss, double step,
                         ResidualPolicy residual) {
  if (step <= 0.0) {
    throw std::invalid_argument("finite_diff_check: step must be > 0");
  }
  GradTape tape;
  DenseMatrix y = forward_with_tape(wts, x, tape, residual);
  BackwardResult analytic = backward(wts, tape, loss.grad(y));

  auto loss_at = [&](const ButterflyWeights& w, const DenseMatrix& input) {
    return loss.value(transform_with_residual(w, input, residual));
  };

  double max_err = 0.0;
  ButterflyWeights perturbed = wts;
  for (size_t e = 0; e < wts.values.size(); ++e) {
    perturbed.values[e] = wts.values[e] + step;
    double plus = loss_at(perturbed, x);
    perturbed.values[e] = wts.values[e] - step;
    double minus = loss_at(perturbed, x);
    perturbed.values[e] = wts.values[e];
    double fd = (plus - minus) / (2.0 * step);
    double a = analytic.dweights[e];
    max_err = std::max(max_err, std::abs(a - fd) / std::max(1.0, std::abs(a)));
  }
  DenseMatrix xp = x;
  for (size_t e = 0; e < x.data.size(); ++e) {
    xp.data[e] = x.data[e] + step;
    double plus = loss_at(wts, xp);
    xp.data[e] = x.data[e] - step;
    double minus = loss_at(wts, xp);
    xp.data[e] = x.data[e];
    double fd = (plus - minus) / (2.0 * step);
    double a = analytic.dx.data[e];
    max_err = std::max(max_err, std::abs(a - fd) / std::max(1.0, std::abs(a)));
  }
  return max_err;
}

}  // namespace bft
