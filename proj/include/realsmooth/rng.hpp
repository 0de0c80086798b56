#ifndef REALSMOOTH_RNG_HPP
#define REALSMOOTH_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "realsmooth/poly_system.hpp"

namespace realsmooth {

// Deterministic stream derivation: the master seed plus a purpose tag yields
// an independent engine, so e.g. gamma and xi draws do not interleave.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (char c : tag) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
    h ^= h >> 31;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t seed, const std::string& tag) : eng_(derive_seed(seed, tag)) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

  // Uniform on the complex unit circle.
  Complex unit_complex() {
    double theta = uniform(0.0, 6.283185307179586476925286766559);
    return Complex(std::cos(theta), std::sin(theta));
  }

  Complex gaussian_complex() { return Complex(gaussian(), gaussian()); }

  // Orthogonal matrix from the QR factorization of a Gaussian matrix.
  RMat random_orthogonal(int n) {
    RMat G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = gaussian();
    Eigen::HouseholderQR<RMat> qr(G);
    RMat Q = qr.householderQ();
    // Fix signs so the factorization is unique given G.
    RMat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    return Q;
  }

  // Generic affine-linear polynomial with unit-norm complex coefficients.
  Polynomial random_affine_linear(std::size_t nvars) {
    Polynomial p = Polynomial::constant(unit_complex(), nvars);
    for (std::size_t v = 0; v < nvars; ++v)
      p += Polynomial::variable(v, nvars) * unit_complex();
    return p;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace realsmooth

#endif
