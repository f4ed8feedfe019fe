#include "geomolt/core/connection.hpp"

namespace geomolt {

Christoffel christoffel_from_jet(const TensorJet& jet) {
  if (jet.order < 1) throw DomainError("christoffel: jet needs first derivatives");
  const int n = jet.dim();
  const Mat ginv = checked_inverse(jet.value);
  Christoffel c;
  c.dim = n;
  for (int k = 0; k < n; ++k) c.gamma[k] = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int m = 0; m < n; ++m) {
        const double lowered = 0.5 * (jet.d1[i](j, m) + jet.d1[j](m, i) - jet.d1[m](i, j));
        for (int k = 0; k < n; ++k) c.gamma[k](i, j) += ginv(k, m) * lowered;
      }
      for (int k = 0; k < n; ++k) c.gamma[k](j, i) = c.gamma[k](i, j);
    }
  }
  return c;
}

}  // namespace geomolt
