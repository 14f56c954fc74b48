#include "spg/suites.hpp"

#include <cstdio>
#include <iomanip>

namespace spg {

namespace {

std::string b(bool v) { return v ? "true" : "false"; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ReportRow row(const std::string& check, const std::optional<bool>& expected, bool observed, double residual = 0.0,
              int samples = 0, std::string note = "") {
  ReportRow r{check, expected ? b(*expected) : "-", b(observed), true, residual, samples, std::move(note)};
  r.match = !expected || *expected == observed;
  return r;
}

std::string to_observed(Involutivity v) {
  switch (v) {
    case Involutivity::involutive_on_samples:
      return "true";
    case Involutivity::not_involutive:
      return "false";
    default:
      return "inconclusive";
  }
}

void sampled_rows(Report& rep, const SymPoissonPair& pair, const Expectations& ex, const std::string& prefix = "") {
  const auto& spec = rep.spec;
  auto sp = is_symmetric_poisson(pair, spec);
  rep.rows.push_back(row(prefix + "symmetric_poisson", ex.symmetric_poisson, sp.holds, sp.residual, sp.samples,
                         sp.witness));
  auto st = is_strong(pair, spec);
  rep.rows.push_back(row(prefix + "strong", ex.strong, st.holds, st.residual, st.samples, st.witness));
  auto pa = is_parallel(pair, spec);
  rep.rows.push_back(row(prefix + "parallel", ex.parallel, pa.holds, pa.residual, pa.samples, pa.witness));
  auto inv = involutivity_check(pair, spec);
  ReportRow r{prefix + "involutive", ex.involutive ? b(*ex.involutive) : "-", to_observed(inv.verdict), true,
              inv.residual, inv.samples, inv.witness};
  r.match = !ex.involutive || r.observed == r.expected;
  if (inv.min_rank != inv.max_rank)
    r.note += (r.note.empty() ? "" : "; ") + std::string("rank ") + std::to_string(inv.min_rank) + ".." +
              std::to_string(inv.max_rank);
  rep.rows.push_back(r);
}

void apply_overrides(Report& rep, const Expectations& ex) {
  auto over = [&](const std::string& name, const std::optional<bool>& v) {
    if (!v) return;
    for (auto& r : rep.rows)
      if (r.check == name) {
        r.expected = b(*v);
        r.match = r.observed == r.expected;
      }
  };
  over("symmetric_poisson", ex.symmetric_poisson);
  over("strong", ex.strong);
  over("parallel", ex.parallel);
  over("involutive", ex.involutive);
}

}  // namespace

bool Report::all_match() const {
  for (const auto& r : rows)
    if (!r.match) return false;
  return true;
}

Report check_structure(const StructureFile& f, const SampleSpec& spec) {
  if (!f.has_structure()) {
    if (!f.catalog) throw StructureFileError(f.source + ": nothing to check");
    auto rep = run_catalog(*f.catalog, spec);
    apply_overrides(rep, f.expect);
    return rep;
  }
  Report rep{f.source, spec, {}};
  auto pair = f.pair();
  sampled_rows(rep, pair, f.expect);
  for (const auto& p : f.probes) {
    auto cd = characteristic_data(pair.theta(), p.point);
    if (p.rank || !p.signature) {
      ReportRow r{"probe " + p.name + " rank", p.rank ? std::to_string(*p.rank) : "-", std::to_string(cd.rank), true,
                  0.0, 1, ""};
      r.match = !p.rank || *p.rank == cd.rank;
      rep.rows.push_back(r);
    }
    if (p.signature) {
      auto s = [](int a, int c) { return "(" + std::to_string(a) + "," + std::to_string(c) + ")"; };
      ReportRow r{"probe " + p.name + " signature", s(p.signature->first, p.signature->second), s(cd.p, cd.q), true,
                  0.0, 1, ""};
      r.match = r.expected == r.observed;
      rep.rows.push_back(r);
    }
  }
  return rep;
}

Report jj_suite(const JJEntry& e, const SampleSpec& spec) {
  Report rep{"jj:" + e.id, spec, {}};
  auto jac = is_jacobi_jordan(e.algebra);
  rep.rows.push_back(row("jacobi", e.expected.jacobi, jac.holds, 0.0, 0, jac.witness));
  auto ass = is_associative(e.algebra);
  rep.rows.push_back(row("associative", e.expected.associative, ass.holds, 0.0, 0, ass.witness));
  Expectations ex;
  ex.symmetric_poisson = e.expected.symmetric_poisson;
  ex.strong = e.expected.strong;
  ex.involutive = e.expected.involutive;
  sampled_rows(rep, to_linear_structure(e.algebra), ex);
  return rep;
}

Report li_suite(const LiEntry& e, const SampleSpec& spec) {
  Report rep{"liealg:" + e.id, spec, {}};
  auto sp = li_is_symmetric_poisson(e.theta, e.nabla);
  rep.rows.push_back(row("symmetric_poisson", e.expected.symmetric_poisson, sp.holds, 0.0, 0, sp.witness));
  auto st = li_is_strong(e.theta, e.nabla);
  rep.rows.push_back(row("strong", e.expected.strong, st.holds, 0.0, 0, st.witness));
  auto pa = li_is_parallel(e.theta, e.nabla);
  rep.rows.push_back(row("parallel", e.expected.parallel, pa.holds, 0.0, 0, pa.witness));
  auto inv = li_is_involutive(e.theta, e.algebra);
  rep.rows.push_back(row("involutive", e.expected.involutive, inv.holds, 0.0, 0, inv.witness));
  // Same verdicts recomputed in coordinates when a polynomial frame is known.
  if (auto frame = polynomial_frame(e.id)) {
    Expectations ex;
    ex.symmetric_poisson = sp.holds;
    ex.strong = st.holds;
    ex.parallel = pa.holds;
    ex.involutive = inv.holds;
    sampled_rows(rep, to_chart(*frame, e.algebra, e.theta, e.nabla), ex, "chart ");
  }
  return rep;
}

Report run_catalog(const std::string& id, const SampleSpec& spec) {
  auto colon = id.find(':');
  if (colon != std::string::npos) {
    auto kind = id.substr(0, colon), name = id.substr(colon + 1);
    if (kind == "jj") return jj_suite(jj_entry(name), spec);
    if (kind == "liealg") return li_suite(li_entry(name), spec);
    throw AlgebraError("unknown catalog '" + kind + "'");
  }
  for (const auto& e : jj_catalog())
    if (e.id == id) return jj_suite(e, spec);
  return li_suite(li_entry(id), spec);
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& e : jj_catalog()) ids.push_back("jj:" + e.id);
  for (const auto& e : li_catalog()) ids.push_back("liealg:" + e.id);
  return ids;
}

void write_text(std::ostream& os, const std::vector<Report>& reports) {
  int total = 0, matched = 0;
  for (const auto& rep : reports) {
    os << "== " << rep.subject << "  seed " << rep.spec.seed << "  tol " << fmt(rep.spec.tol) << "  samples "
       << rep.spec.count << "\n";
    for (const auto& r : rep.rows) {
      ++total;
      matched += r.match;
      os << "  " << std::left << std::setw(26) << r.check << std::setw(14) << r.expected << std::setw(14)
         << r.observed << std::setw(9) << (r.match ? "ok" : "MISMATCH") << std::setw(11) << fmt(r.residual)
         << std::setw(4) << r.samples;
      if (!r.note.empty()) os << "  " << r.note;
      os << "\n";
    }
  }
  os << matched << "/" << total << " checks match\n";
}

void write_csv(std::ostream& os, const std::vector<Report>& reports) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  os << "subject,check,expected,observed,match,residual,samples,seed,tol,note\n";
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      os << quote(rep.subject) << "," << quote(r.check) << "," << r.expected << "," << r.observed << ","
         << (r.match ? "true" : "false") << "," << fmt(r.residual) << "," << r.samples << "," << rep.spec.seed << ","
         << fmt(rep.spec.tol) << "," << quote(r.note) << "\n";
}

}  // namespace spg
