#pragma once

#include <array>
#include <map>
#include <string>

#include "lobe/fock.hpp"

namespace lobe {

/// Optional coefficient table for the field-theory models. Keys are index
/// tuples (unused slots -1); missing tuples default to 1.
struct CoefficientTable {
  std::map<std::array<int, 4>, cplx> values;

  cplx get(std::array<int, 4> key) const {
    auto it = values.find(key);
    return it == values.end() ? cplx{1.0, 0.0} : it->second;
  }
};

/// Parses CSV with header i,j,k,l,re,im. Unused index columns hold -1.
CoefficientTable load_coefficients(const std::string& path);

/// H = a†a + g (a + a†)^4, emitted in normal-ordered form.
OperatorExpr quartic_oscillator(double g);

/// H = C_f b†b + C_b a†a + g b†b (a + a†).
OperatorExpr static_yukawa(double c_f, double c_b, double g);

/// Light-front phi^4 term structure at resolution K (momenta 1..K, mode i
/// carries momentum i+1); every momentum-conserving index tuple is emitted.
OperatorExpr phi4_terms(int resolution, const CoefficientTable& coeffs = {});

/// Light-front Yukawa term structure at resolution K. Antifermionic modes are
/// remapped after the fermionic ones (d_j -> fermionic mode K + j).
OperatorExpr yukawa_terms(int resolution, const CoefficientTable& coeffs = {});

}  // namespace lobe
