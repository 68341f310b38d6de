#pragma once

// Modified Bessel functions of the second kind, orders 0, 1 and 2, for
// positive real arguments. Power series below x = 2, Steed's continued
// fraction (Temme's form) above; relative accuracy about 1e-14.

namespace collapse::bessel {

double k0(double x);
double k1(double x);
/// K2(x) = K0(x) + 2 K1(x) / x.
double k2(double x);

}  // namespace collapse::bessel
