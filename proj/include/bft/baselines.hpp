#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bft/butterfly.hpp"
#include "bft/tensor.hpp"

namespace bft {

// Unitary-normalized radix-2 FFT (1/sqrt(n) in both directions), so
// inverse(forward(x)) == x without a separate scale. Length must be a
// power of two.
std::vector<std::complex<double>> fft_radix2(
    std::vector<std::complex<double>> x, bool inverse);

// Unitary fast Walsh-Hadamard transform in place; H is symmetric and
// orthogonal, so applying it twice is the identity.
void fwht_unitary_inplace(std::vector<double>& x);

// C[i][j] = first_row[(j - i) mod n]: every row is a cyclic shift of the
// previous one.
struct CirculantWeights {
  std::vector<double> first_row;
};

// Power-of-two n goes through the FFT path; anything else falls back to
// the naive O(n^2) product.
std::vector<double> circulant_apply(const CirculantWeights& w,
                                    const std::vector<double>& x);

// Implied operator U V^T with rank <= r; apply as U (V^T x) in 2nr MACs.
struct LowRankWeights {
  DenseMatrix u;  // n x r
  DenseMatrix v;  // n x r
};

std::vector<double> lowrank_apply(const LowRankWeights& w,
                                  const std::vector<double>& x);

// Default rank matching a log-n parameter budget.
int default_lowrank_rank(int n);

// Operator S H G P H B with diagonal S, G, B, permutation P and the
// unitary Walsh-Hadamard transform H. (P v)[i] = v[perm[i]]. n must be a
// power of two.
struct FastfoodWeights {
  std::vector<double> s;
  std::vector<double> g;
  std::vector<double> b;
  std::vector<int> perm;
};

std::vector<double> fastfood_apply(const FastfoodWeights& w,
                                   const std::vector<double>& x);

enum class BaselineKind { Circulant, LowRank, Fastfood, Bft };

struct BaselineFlopsParams {
  int rank = 0;               // low-rank only; 0 means default_lowrank_rank
  std::vector<int> radices;   // bft only; empty means base-2
};

// Documented MAC counts per fusion kind at channel count n:
//   circulant: 4 * (3*(n/2)*log2(n) + n)   (complex work expanded at
//              1 complex MAC = 4 real multiplies + 2 real adds)
//   low-rank:  2*n*r
//   fastfood:  2*n*log2(n) + 3*n
//   bft:       count_flops of the radix sequence
int64_t baseline_flops(BaselineKind kind, int n,
                       const BaselineFlopsParams& params = {});

}  // namespace bft
