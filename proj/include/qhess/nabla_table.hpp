#pragma once

// Coefficient table for the 2n x 2 array of first-order operators nabla_{i,alpha}
// acting on functions of R^{4n}:
//
//   row 2l:    nabla_{2l,0}   = d_{4l}   + i d_{4l+1}
//              nabla_{2l,1}   = -d_{4l+2} - i d_{4l+3}
//   row 2l+1:  nabla_{2l+1,0} = d_{4l+2} - i d_{4l+3}
//              nabla_{2l+1,1} = d_{4l}   - i d_{4l+1}
//
// The second-order coefficients of the Baston operator follow by expanding
// (nabla_{i0} nabla_{j1} - nabla_{i1} nabla_{j0}) u into real second partials; the
// contraction below turns any real symmetric Hessian (analytic or stencil-sampled)
// into the associated two-form coefficients c_{ij} (i < j, coefficient of w^i ^ w^j).

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "qhess/util.hpp"

namespace qhess {

struct NablaTerm {
  int axis;
  Cplx coeff;
};

// The two nonzero terms of nabla_{i,alpha}.
std::array<NablaTerm, 2> nabla_terms(int i, int alpha);

// Upper-triangular pair enumeration for two-form coefficient storage: pairs (i, j)
// with 0 <= i < j < 2n in lexicographic order.
int pair_count(int n);                       // = n(2n-1)
int pair_index(int i, int j, int n);         // lex position of (i, j)
std::pair<int, int> pair_from_index(int idx, int n);

// c_{ij} = (nabla_{i0} nabla_{j1} - nabla_{i1} nabla_{j0}) u for a function with real
// symmetric Hessian H (entries H(a, b) = d_a d_b u). Output indexed by pair_index.
std::vector<Cplx> twoform_from_real_hessian(
    const std::function<double(int, int)>& H, int n);

// Allocation-free variant for per-point loops: H is the dense row-major 4n x 4n
// Hessian, out has pair_count(n) slots.
void twoform_from_real_hessian(const double* H, int n, Cplx* out);

}  // namespace qhess
