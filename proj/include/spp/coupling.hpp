#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "spp/dispersion.hpp"

namespace spp {

struct PairCoupling {
  cplx c12;           // 1/m
  cplx c21;           // 1/m
  double separation;  // m
};

namespace detail {

// sinh(x)/x, series near the origin.
inline cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace detail

/// Closed form of
///   int exp(-ka |z - d/2|) exp(-kb |z + d/2|) dz  over the real line.
/// Unconjugated product; the middle slab uses sinh(x)/x so ka == kb is regular.
inline cplx overlap_integral(cplx ka, cplx kb, double d) {
  if (!(ka.real() > 0 && kb.real() > 0)) throw DomainError("overlap requires Re(k) > 0");
  if (!(d >= 0)) throw DomainError("overlap requires d >= 0");
  const cplx sum = ka + kb;
  const cplx above = std::exp(-kb * d) / sum;  // z > d/2
  const cplx below = std::exp(-ka * d) / sum;  // z < -d/2
  const cplx slab = d * std::exp(-0.5 * sum * d) * detail::sinhc(0.5 * (ka - kb) * d);
  return above + below + slab;
}

/// C12 = (k2^2 - k0^2) / (2q) * O / N^2, C21 likewise with k1. Both sheets share `mode`.
inline PairCoupling coupling_coefficient(const SppMode& mode, double d) {
  if (!(d > 0)) throw DomainError("separation d > 0 required");
  const double n2 = mode.normalization * mode.normalization;
  const cplx overlap = overlap_integral(mode.k1, mode.k2, d) / n2;
  const cplx k0sq = mode.k0 * mode.k0;
  const cplx pre = 0.5 * overlap / mode.q;
  return PairCoupling{pre * (mode.k2 * mode.k2 - k0sq), pre * (mode.k1 * mode.k1 - k0sq), d};
}

/// Coupling strength entering the chain Hamiltonian: |Re C12|.
inline double coupling_strength(const SppMode& mode, double d) {
  return std::abs(coupling_coefficient(mode, d).c12.real());
}

inline std::vector<PairCoupling> coupling_vs_distance(const SppMode& mode, std::span<const double> d_grid) {
  if (d_grid.empty()) throw DomainError("empty separation grid");
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > 0)) throw DomainError("separation grid must be positive");
    if (i > 0 && !(d_grid[i] > d_grid[i - 1])) throw DomainError("separation grid must be strictly increasing");
  }
  std::vector<PairCoupling> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) out.push_back(coupling_coefficient(mode, d));
  return out;
}

}  // namespace spp
