#pragma once

#include "geomolt/core/metric_field.hpp"

namespace geomolt {

/// Christoffel symbols at a point: gamma[k](i, j) = Gamma^k_ij.
struct Christoffel {
  std::array<Mat, kMaxDim> gamma;
  int dim = 0;
  double operator()(int k, int i, int j) const { return gamma[k](i, j); }
};

/// Gamma^k_ij = 1/2 g^km (d_i g_jm + d_j g_mi - d_m g_ij) from a jet of order >= 1.
Christoffel christoffel_from_jet(const TensorJet& jet);

}  // namespace geomolt
