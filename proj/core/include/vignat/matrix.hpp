#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vignat {

// Dense row-major matrix of doubles. Small and boring on purpose; every
// numeric kernel in the model is written against this.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0);

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  void fill(double v);
  bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
};

// out = a * transpose(b); a is n x k, b is m x k, out is n x m.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// out = a * b; a is n x k, b is k x m.
Matrix matmul_nn(const Matrix& a, const Matrix& b);
// out = transpose(a) * b; a is n x k, b is n x m, out is k x m.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

double dot(const std::vector<double>& a, const std::vector<double>& b);

// Deterministic PRNG (splitmix64). Doubles and bounded ints are derived by
// hand so results do not depend on library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  int uniform_int(int lo, int hi);         // [lo, hi] inclusive

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
      int j = uniform_int(0, i);
      std::swap(items[i], items[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from one master seed and a purpose
// label, so each pipeline stage gets its own stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

// Uniform Glorot initialization with limit sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(int rows, int cols, int fan_in, int fan_out, Rng& rng);

}  // namespace vignat
