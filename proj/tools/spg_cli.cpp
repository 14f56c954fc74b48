// spg: batch front end for structure files, catalogs and PW integrations.
//
// Exit codes: 0 pass, 1 usage or parse error, 2 expectation mismatch, 3 numeric failure.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "spg/suites.hpp"

using namespace spg;

namespace {

enum Exit { kPass = 0, kUsage = 1, kMismatch = 2, kNumeric = 3 };

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  double tol = kDefaultTol;
  int samples = kDefaultSampleCount;
  SampleSpec spec() const { return {samples, seed, tol}; }
};

int emit(const std::vector<Report>& reports, const std::string& format) {
  if (format == "csv")
    write_csv(std::cout, reports);
  else
    write_text(std::cout, reports);
  for (const auto& r : reports)
    if (!r.all_match()) return kMismatch;
  return kPass;
}

// Runs f, mapping library exceptions onto exit codes.
template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const StructureFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const GeometryError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

struct IntegrateArgs {
  std::string file;
  std::string hamiltonian;
  std::vector<double> x0, p0;
  double dt = 1e-3;
  std::size_t steps = 0;
  std::vector<std::string> monitors;
  std::string out;
};

void add_speed_channel(Trajectory& tr, const std::optional<SymPoissonPair>& pair) {
  if (!pair || tr.states.empty()) return;
  tr.channel_names.push_back("sq_theta");
  tr.channels.push_back(monitor_speed_square(*pair, tr));
}

void summarize(std::ostream& os, const Trajectory& tr) {
  char buf[32];
  for (const auto& nm : tr.channel_names) {
    if (tr.channel(nm).empty()) continue;
    std::snprintf(buf, sizeof buf, "%.3e", tr.drift(nm));
    os << "max drift " << nm << " " << buf << "\n";
  }
}

int run_integrate(const IntegrateArgs& a) {
  auto f = load_structure(a.file);
  if (!f.chart) throw StructureFileError(a.file + ": integrate needs a [chart]");
  const Chart& c = *f.chart;
  int n = c.n();
  if (static_cast<int>(a.x0.size()) != n || static_cast<int>(a.p0.size()) != n) {
    std::cerr << "error: --x0 and --p0 need " << n << " components\n";
    return kUsage;
  }
  for (double v : a.x0)
    if (!std::isfinite(v)) return std::cerr << "error: non-finite --x0\n", kUsage;
  for (double v : a.p0)
    if (!std::isfinite(v)) return std::cerr << "error: non-finite --p0\n", kUsage;

  std::optional<SymPoissonPair> pair;
  if (f.has_structure()) pair = f.pair();
  Connection nabla = f.nabla ? *f.nabla : Connection(c);
  Chart ph = phase_chart(c);

  std::string htext = !a.hamiltonian.empty() ? a.hamiltonian : f.hamiltonian.value_or("theta");
  PhaseField h;
  if (htext == "theta") {
    if (!pair) throw StructureFileError(a.file + ": H = theta needs a [theta] section");
    h = vertical_lift(pair->theta());
  } else {
    h = PhaseField{c, ph.parse(htext).expr()};
  }

  bool want_sq = false;
  std::vector<Monitor> extra;
  for (const auto& m : a.monitors) {
    if (m == "sq" || m == "sq_theta") {
      if (!pair) throw StructureFileError(a.file + ": the sq monitor needs a [theta] section");
      want_sq = true;
    } else if (m != "H") {
      extra.push_back({m, PhaseField{c, ph.parse(m).expr()}});
    }
  }

  auto write = [&](Trajectory& tr) {
    if (want_sq) add_speed_channel(tr, pair);
    if (a.out.empty()) {
      write_csv(std::cout, tr);
      std::cout.flush();
      summarize(std::cerr, tr);
    } else {
      std::ofstream os(a.out);
      if (!os) throw StructureFileError(a.out + ": cannot write");
      write_csv(os, tr);
      summarize(std::cout, tr);
    }
  };

  CotangentState s0{a.x0, a.p0};
  try {
    auto tr = integrate_pw(nabla, h, s0, a.dt, a.steps, extra);
    write(tr);
  } catch (const BlowUp& e) {
    Trajectory partial = e.partial();
    write(partial);
    std::cerr << "blow-up: " << e.what() << "\n";
    return kNumeric;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric Poisson structures: verdict suites, catalogs and PW dynamics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "sampling seed")->capture_default_str();
  app.add_option("--tol", g.tol, "residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--samples", g.samples, "sample points per check")->capture_default_str()->check(CLI::PositiveNumber);

  std::string format = "text";
  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  };

  std::string check_file;
  auto* check = app.add_subcommand("check", "run the verdict suite of a structure file");
  check->add_option("file", check_file)->required()->check(CLI::ExistingFile);
  format_opt(check);

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "integrate PW dynamics and write a trajectory CSV");
  integ->add_option("file", ia.file)->required()->check(CLI::ExistingFile);
  integ->add_option("--hamiltonian", ia.hamiltonian, "expression in x.., p_x.., or 'theta' for the vertical lift");
  integ->add_option("--x0", ia.x0, "initial position")->required()->delimiter(',');
  integ->add_option("--p0", ia.p0, "initial momentum")->required()->delimiter(',');
  integ->add_option("--dt", ia.dt)->capture_default_str()->check(CLI::PositiveNumber);
  integ->add_option("--steps", ia.steps)->required()->check(CLI::PositiveNumber);
  integ->add_option("--monitors", ia.monitors, "sq, H or phase-space expressions")->delimiter(',');
  integ->add_option("--out", ia.out, "CSV path (stdout when omitted)");

  std::string cat_id;
  bool cat_all = false;
  auto* cat = app.add_subcommand("catalog", "run the expected-verdict suite of catalog entries");
  auto* id_opt = cat->add_option("--id", cat_id, "entry id, e.g. jj:dim5_nonassoc or so3");
  auto* all_opt = cat->add_flag("--all", cat_all, "every shipped entry");
  id_opt->excludes(all_opt);
  cat->require_option(1);
  format_opt(cat);

  std::string rep_file, rep_id;
  auto* rep = app.add_subcommand("report", "check report for a file, one entry, or the whole catalog");
  rep->add_option("file", rep_file)->check(CLI::ExistingFile);
  rep->add_option("--id", rep_id);
  format_opt(rep);

  std::string exp_id, exp_out;
  auto* exp = app.add_subcommand("export", "write a jj catalog entry as a structure file");
  exp->add_option("id", exp_id)->required();
  exp->add_option("--out", exp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  auto catalog_reports = [&](const std::vector<std::string>& ids) {
    std::vector<Report> out;
    for (const auto& id : ids) out.push_back(run_catalog(id, g.spec()));
    return out;
  };

  if (*check) return guarded([&] { return emit({check_structure(load_structure(check_file), g.spec())}, format); });
  if (*integ) return guarded([&] { return run_integrate(ia); });
  if (*cat)
    return guarded([&] { return emit(catalog_reports(cat_all ? catalog_ids() : std::vector{cat_id}), format); });
  if (*rep)
    return guarded([&] {
      if (!rep_file.empty()) return emit({check_structure(load_structure(rep_file), g.spec())}, format);
      return emit(catalog_reports(rep_id.empty() ? catalog_ids() : std::vector{rep_id}), format);
    });
  if (*exp)
    return guarded([&] {
      auto id = exp_id.rfind("jj:", 0) == 0 ? exp_id.substr(3) : exp_id;
      auto f = export_linear_structure(jj_entry(id).algebra, id);
      if (exp_out.empty()) {
        write_structure(std::cout, f);
      } else {
        std::ofstream os(exp_out);
        if (!os) throw StructureFileError(exp_out + ": cannot write");
        write_structure(os, f);
      }
      return int(kPass);
    });
  return kUsage;
}
