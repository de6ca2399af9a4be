#pragma once

#include <string>
#include <vector>

#include "tpq/geom.hpp"

namespace tpq::corpus {

/// R^3 with Lambda = d1 ^ d2 and phi = dx1 ^ dx2 ^ dx3.
struct Example1 {
  ChartPtr chart;
  MultiVector lambda;
  Form phi;
};
Example1 example1();

/// R^{2n} with Darboux omega0, Lambda = f Lambda0, phi = -f^-2 omega0 ^ df
/// for an opaque f. `alpha` has opaque components a1..a{2n} and
/// Z = Lambda0^sharp(alpha).
struct Example2 {
  ChartPtr chart;
  Form omega0;
  MultiVector lambda0;
  Expr f;
  MultiVector lambda;
  Form phi;
  Form alpha;
  MultiVector z;
};
Example2 example2(int n = 2);

/// R^{2n} x R, Lambda = e^t (Lambda0 + Lambda0^sharp(df) ^ d_t),
/// phi = -e^-t omega0 ^ dt with Darboux omega0. With `opaque_f` false,
/// f = 0 and alpha0 = sum x_{2k-1} dx_{2k} gives the prequantization data
/// Z = d_t, Phi = d(e^-t alpha0).
struct Example3 {
  ChartPtr chart;
  Form omega0;
  MultiVector lambda0;
  Expr f;
  MultiVector lambda;
  Form phi;
  Form alpha0;
  MultiVector z;
  Form big_phi;
};
Example3 example3(int n = 2, bool opaque_f = true);

/// Exact structure: the f = 0 case of Example3, where Lambda = del_phi(X0)
/// with X0 = -d_t - Lambda0^sharp(alpha0); prequantized by Z = -X0, Phi = 0.
struct Example4 {
  ChartPtr chart;
  MultiVector lambda;
  Form phi;
  MultiVector x0;
  MultiVector z;
};
Example4 example4(int n = 2);

/// The Wirtinger chart (z1..zn, zb1..zbn, t) with real opaque f(z, zb) and,
/// when requested, a generic real observable g(z, zb, t).
struct Quant51 {
  ChartPtr chart;
  Expr f;
  Expr g;
  MultiVector lambda;
  Form phi;
  std::vector<Form> polarization;  // dz_k
  std::vector<Form> complement;    // dzb_l, dt
  int n = 2;
  int z(int k) const { return k; }
  int zb(int k) const { return n + k; }
  int t() const { return 2 * n; }
};
Quant51 quant51(int n = 2, bool with_g = false);

}  // namespace tpq::corpus
