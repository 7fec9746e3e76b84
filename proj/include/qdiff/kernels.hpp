#pragma once

#include "qdiff/complexnum.hpp"

#include <cstddef>
#include <vector>

namespace qdiff::kernels {

// Truncated Cauchy product: out[k] = sum_{i+j=k} a[i]*b[j] for k < n.
// The serial version is the reference; the parallel one must match it
// coefficient for coefficient (the per-k sums are independent).
void conv_serial(const std::vector<Complex>& a, const std::vector<Complex>& b,
                 std::vector<Complex>& out, std::size_t n);
void conv_parallel(const std::vector<Complex>& a, const std::vector<Complex>& b,
                   std::vector<Complex>& out, std::size_t n, unsigned digits);

// Dispatches on problem size: tiny products are not worth a fork/join.
void conv(const std::vector<Complex>& a, const std::vector<Complex>& b,
          std::vector<Complex>& out, std::size_t n, unsigned digits);

// out[k] = ||(k+1)*omega + alpha||_Z (distance to the nearest integer),
// for k = 0..n-1.
void norm_z_profile_serial(const Real& omega, const Real& alpha,
                           std::vector<Real>& out, std::size_t n);
void norm_z_profile_parallel(const Real& omega, const Real& alpha,
                             std::vector<Real>& out, std::size_t n, unsigned digits);
void norm_z_profile(const Real& omega, const Real& alpha,
                    std::vector<Real>& out, std::size_t n, unsigned digits);

} // namespace qdiff::kernels
