#pragma once

#include <vector>

namespace tlau {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule, exact for polynomials up to degree 2n-1.
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double lo, double hi);

}  // namespace tlau
