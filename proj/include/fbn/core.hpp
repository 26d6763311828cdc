#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fbn {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);

/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& a, double alpha);
Vector zeros(int n);

bool all_finite(const Vector& a);

/// Throw std::runtime_error if a contains NaN or Inf.
void require_finite(const Vector& a, const char* where);
/// Throw std::invalid_argument on dimension mismatch.
void require_dim(const Vector& a, int n, const char* where);

// Self-contained deterministic RNG (splitmix64 + Box-Muller) so that
// generated problems are reproducible across platforms and toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal.
  double gaussian();
  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t next();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fbn
