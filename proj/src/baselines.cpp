#include "bft/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bft {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int l = 0;
  while ((1 << l) < n) ++l;
  return l;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::vector<std::complex<double>> fft_radix2(
    std::vector<std::complex<double>> x, bool inverse) {
  int n = static_cast<int>(x.size());
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fft_radix2: length " + std::to_string(n) +
                                " is not a power of 2");
  }
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  double sign = inverse ? 1.0 : -1.0;
  for (int len = 2; len <= n; len <<= 1) {
    double angle = sign * 2.0 * kPi / len;
    std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double> even = x[i + j];
        std::complex<double> odd = x[i + j + len / 2] * w;
        x[i + j] = even + odd;
        x[i + j + len / 2] = even - odd;
        w *= wlen;
      }
    }
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : x) v *= scale;
  return x;
}

void fwht_unitary_inplace(std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fwht: length " + std::to_string(n) +
                                " is not a power of 2");
  }
  for (int h = 1; h < n; h <<= 1) {
    for (int i = 0; i < n; i += h << 1) {
      for (int j = i; j < i + h; ++j) {
        double a = x[j];
        double b = x[j + h];
        x[j] = a + b;
        x[j + h] = a - b;
      }
    }
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : x) v *= scale;
}

std::vector<double> circulant_apply(const CirculantWeights& w,
                                    const std::vector<double>& x) {
  int n = static_cast<int>(w.first_row.size());
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("circulant_apply: input length " +
                                std::to_string(x.size()) +
                                " does not match n=" + std::to_string(n));
  }
  if (!is_power_of_two(n)) {
    // Naive fallback.
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        y[i] += w.first_row[((j - i) % n + n) % n] * x[j];
      }
    }
    return y;
  }
  // y = C x is the circular convolution of x with the first column
  // c[i] = first_row[(-i) mod n]; under unitary normalization the
  // spectrum product picks up a sqrt(n).
  std::vector<std::complex<double>> c(n), xs(n);
  for (int i = 0; i < n; ++i) {
    c[i] = w.first_row[(n - i) % n];
    xs[i] = x[i];
  }
  auto cf = fft_radix2(std::move(c), false);
  auto xf = fft_radix2(std::move(xs), false);
  double root_n = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) xf[i] *= cf[i] * root_n;
  auto y = fft_radix2(std::move(xf), true);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = y[i].real();
  return out;
}

std::vector<double> lowrank_apply(const LowRankWeights& w,
                                  const std::vector<double>& x) {
  if (w.u.cols != w.v.cols || w.u.rows != w.v.rows) {
    throw std::invalid_argument(
        "lowrank_apply: U is " + std::to_string(w.u.rows) + "x" +
        std::to_string(w.u.cols) + " but V is " + std::to_string(w.v.rows) +
        "x" + std::to_string(w.v.cols));
  }
  if (static_cast<int>(x.size()) != w.v.rows) {
    throw std::invalid_argument("lowrank_apply: input length " +
                                std::to_string(x.size()) +
                                " does not match n=" +
                                std::to_string(w.v.rows));
  }
  std::vector<double> mid = matvec(transpose(w.v), x);
  return matvec(w.u, mid);
}

int default_lowrank_rank(int n) {
  if (n < 2) return 1;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
}

std::vector<double> fastfood_apply(const FastfoodWeights& w,
                                   const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fastfood_apply: length " +
                                std::to_string(n) + " is not a power of 2");
  }
  if (static_cast<int>(w.s.size()) != n || static_cast<int>(w.g.size()) != n ||
      static_cast<int>(w.b.size()) != n ||
      static_cast<int>(w.perm.size()) != n) {
    throw std::invalid_argument(
        "fastfood_apply: component sizes do not match n=" + std::to_string(n));
  }
  std::vector<char> seen(n, 0);
  for (int p : w.perm) {
    if (p < 0 || p >= n || seen[p]) {
      throw std::invalid_argument("fastfood_apply: perm is not a permutation");
    }
    seen[p] = 1;
  }
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = w.b[i] * x[i];
  fwht_unitary_inplace(v);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = v[w.perm[i]];
  for (int i = 0; i < n; ++i) p[i] *= w.g[i];
  fwht_unitary_inplace(p);
  for (int i = 0; i < n; ++i) p[i] *= w.s[i];
  return p;
}

int64_t baseline_flops(BaselineKind kind, int n,
                       const BaselineFlopsParams& params) {
  if (n < 1) {
    throw std::invalid_argument("baseline_flops: n must be >= 1");
  }
  switch (kind) {
    case BaselineKind::Circulant: {
      if (!is_power_of_two(n)) {
        throw std::invalid_argument(
            "baseline_flops: circulant count needs power-of-2 n");
      }
      int64_t complex_macs =
          3 * (static_cast<int64_t>(n) / 2) * log2_exact(n) + n;
      return 4 * complex_macs;
    }
    case BaselineKind::LowRank: {
      int r = params.rank > 0 ? params.rank : default_lowrank_rank(n);
      return 2 * static_cast<int64_t>(n) * r;
    }
    case BaselineKind::Fastfood: {
      if (!is_power_of_two(n)) {
        throw std::invalid_argument(
            "baseline_flops: fastfood count needs power-of-2 n");
      }
      return 2 * static_cast<int64_t>(n) * log2_exact(n) + 3 * static_cast<int64_t>(n);
    }
    case BaselineKind::Bft: {
      if (!params.radices.empty()) {
        return count_flops(ButterflySpec(n, params.radices));
      }
      return count_flops(make_uniform_spec(n, 2));
    }
  }
  throw std::invalid_argument("baseline_flops: unknown kind");
}

}  // namespace bft
