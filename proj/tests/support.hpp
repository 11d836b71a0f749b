#pragma once

// Shared test helpers. The Gauss-sum check below is the only floating-point
// computation in the project; everything it consumes (q values, signatures)
// is exact.

#include <cmath>
#include <complex>

#include "k3mds/discriminant.hpp"

namespace k3mds::testing {

// | sum_x exp(pi*i*q(x)) - sqrt|A| * exp(2*pi*i*(sig+ - sig-)/8) |
inline double milgram_defect(const Lattice& l) {
  auto fqf = discriminant_form(l);
  std::complex<double> sum(0.0, 0.0);
  const double pi = std::acos(-1.0);
  for (const auto& x : fqf.elements()) {
    double qv = static_cast<double>(numerator(fqf.q(x))) /
                static_cast<double>(denominator(fqf.q(x)));
    sum += std::polar(1.0, pi * qv);
  }
  double order = static_cast<double>(fqf.group_order());
  double sig = static_cast<double>(static_cast<long>(fqf.sig_positive) -
                                   static_cast<long>(fqf.sig_negative));
  std::complex<double> target = std::sqrt(order) * std::polar(1.0, 2.0 * pi * sig / 8.0);
  return std::abs(sum - target);
}

// Locate the discriminant element whose lift is congruent to `lift` mod Z^n.
inline FqfElement element_with_lift(const FiniteQuadraticForm& fqf, const std::vector<Rat>& lift) {
  for (const auto& x : fqf.elements()) {
    auto lx = fqf.lift(x);
    bool match = true;
    for (std::size_t i = 0; i < lx.size() && match; ++i)
      if (mod1z(lx[i] - lift[i]) != 0) match = false;
    if (match) return x;
  }
  throw std::runtime_error("element_with_lift: no element has the requested lift");
}

}  // namespace k3mds::testing
