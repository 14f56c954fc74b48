#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "spg/jj.hpp"
#include "spg/liealg.hpp"
#include "spg/structure_file.hpp"

namespace spg {

struct ReportRow {
  std::string check;
  std::string expected;  // "-" when nothing was declared
  std::string observed;
  bool match = true;
  double residual = 0.0;
  int samples = 0;  // 0 for exact checks
  std::string note;
};

struct Report {
  std::string subject;
  SampleSpec spec;
  std::vector<ReportRow> rows;
  bool all_match() const;
};

// Verdicts, involutivity and probe data for a structure file. A file with only a [catalog]
// reference runs that catalog suite, with the file's [expect] entries taking precedence.
Report check_structure(const StructureFile& f, const SampleSpec& spec = {});
Report jj_suite(const JJEntry& e, const SampleSpec& spec = {});
Report li_suite(const LiEntry& e, const SampleSpec& spec = {});
// "jj:dim2", "liealg:so3" or a bare id (jj first). Throws AlgebraError for unknown ids.
Report run_catalog(const std::string& id, const SampleSpec& spec = {});
std::vector<std::string> catalog_ids();

void write_text(std::ostream& os, const std::vector<Report>& reports);
void write_csv(std::ostream& os, const std::vector<Report>& reports);

}  // namespace spg
