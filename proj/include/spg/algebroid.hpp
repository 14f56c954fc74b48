#pragma once

#include "spg/poisson.hpp"

namespace spg {

// [g⁻¹, g⁻¹(K)]_s = 0 under the Levi-Civita connection of g.
Verdict killing_via_schouten(const SymFormField& g, const SymFormField& k, const SampleSpec& s = {});

// [[ι_𝒳, ∇ˢ], ι_𝒴]φ − ι_{[𝒳,𝒴]_s}φ, both sides applied to φ.
// Degrees of 𝒳, 𝒴 and φ are capped at 3 (DegreeOverflow). When deg 𝒳 + deg 𝒴 − 1 > deg φ the
// result is the zero scalar.
SymFormField derived_bracket_check(const Connection& nabla, const SymTensorField& x, const SymTensorField& y,
                                   const SymFormField& phi);
// The left side alone.
SymFormField derived_bracket_lhs(const Connection& nabla, const SymTensorField& x, const SymTensorField& y,
                                 const SymFormField& phi);

// [α, β] = ∇_{θ(α)}β − ∇_{θ(β)}α
SymFormField cotangent_bracket(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b);

// [α, β] + [β, α]
SymFormField antisymmetry_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b);
// [α, fβ] − (θ(α)f)β − f[α, β]
SymFormField leibniz_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b, const Expr& f);
// θ[α, β] − [θα, θβ]
SymTensorField anchor_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b);
// [α, [β, η]] + cyclic
SymFormField cotangent_jacobiator(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b,
                                  const SymFormField& c);
// R(θα, θβ)η + cyclic, with R acting on 1-forms by (R(X,Y)η)(Z) = −η(R(X,Y)Z).
SymFormField bianchi_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b,
                            const SymFormField& c);

struct AlgebroidReport {
  double antisymmetry = 0.0;
  double leibniz = 0.0;
  double anchor = 0.0;
  double jacobi = 0.0;
  double bianchi = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};
// Residuals on the coordinate covectors dxⁱ and the test function f.
AlgebroidReport algebroid_check(const SymPoissonPair& pair, const Expr& f, const SampleSpec& s = {});

}  // namespace spg
