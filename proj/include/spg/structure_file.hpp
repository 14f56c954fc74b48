#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spg/jj.hpp"
#include "spg/pw.hpp"

namespace spg {

class StructureFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Probe {
  std::string name;
  Point point;
  std::optional<int> rank;
  std::optional<std::pair<int, int>> signature;  // (p, q)
};

struct Expectations {
  std::optional<bool> symmetric_poisson;
  std::optional<bool> strong;
  std::optional<bool> parallel;
  std::optional<bool> involutive;
};

// Line-based INI document:
//
//   [chart]       names = "x, y"   box.x = "-1, 1"
//   [theta]       theta[1,1] = "1 + y^2"          (1-based, symmetric)
//   [connection]  gamma[2,1,2] = "1/x"            (Γᵏᵢⱼ, lower indices symmetrized)
//   [hamiltonian] H = "..."                       (names x.., p_x.., or "theta" for θᵛ)
//   [catalog]     ref = "jj:dim2"
//   [expect]      sp / strong / parallel / involutive = true|false
//   [probe]       p1 = "0.5, 0.5"   p1.rank = 1   p1.signature = "1, 0"
struct StructureFile {
  std::string source;
  std::optional<Chart> chart;
  std::optional<SymTensorField> theta;
  std::optional<Connection> nabla;
  std::optional<std::string> hamiltonian;
  std::optional<std::string> catalog;
  Expectations expect;
  std::vector<Probe> probes;

  bool has_structure() const { return theta.has_value(); }
  // Throws StructureFileError without a [theta] section.
  SymPoissonPair pair() const;
};

StructureFile parse_structure(std::istream& in, const std::string& source = "<input>");
StructureFile load_structure(const std::string& path);
void write_structure(std::ostream& out, const StructureFile& f);

// Linear structure θⁱʲ = cᵏᵢⱼ xₖ with exact rational coefficients and a jj: catalog reference.
StructureFile export_linear_structure(const CommutativeAlgebra& a, const std::string& id = "");

}  // namespace spg
