#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spg/suites.hpp"

namespace py = pybind11;
using namespace spg;

namespace {

py::list rows(const Report& r) {
  py::list out;
  for (const auto& row : r.rows) {
    py::dict d;
    d["check"] = row.check;
    d["expected"] = row.expected;
    d["observed"] = row.observed;
    d["match"] = row.match;
    d["residual"] = row.residual;
    d["samples"] = row.samples;
    d["note"] = row.note;
    out.append(d);
  }
  return out;
}

py::dict report_dict(const Report& r) {
  py::dict d;
  d["subject"] = r.subject;
  d["seed"] = r.spec.seed;
  d["tol"] = r.spec.tol;
  d["samples"] = r.spec.count;
  d["all_match"] = r.all_match();
  d["rows"] = rows(r);
  return d;
}

SampleSpec spec(std::uint64_t seed, double tol, int samples) { return {samples, seed, tol}; }

// Structure constants as {(k, i, j): "p/q"} with 1-based indices, as in structure files.
CommutativeAlgebra algebra(int dim, const std::map<std::tuple<int, int, int>, std::string>& c) {
  CommutativeAlgebra a(dim);
  for (const auto& [key, text] : c) {
    auto [k, i, j] = key;
    auto slash = text.find('/');
    long long num = std::stoll(text.substr(0, slash));
    long long den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1));
    a.set(k - 1, i - 1, j - 1, Rational(num, den));
  }
  return a;
}

}  // namespace

PYBIND11_MODULE(_spg, m) {
  m.doc() = "symmetric Poisson structures: verdict suites, catalogs and dynamics";
  m.attr("DEFAULT_SEED") = kDefaultSeed;
  m.attr("DEFAULT_TOL") = kDefaultTol;
  m.attr("DEFAULT_SAMPLES") = kDefaultSampleCount;

  py::register_exception<StructureFileError>(m, "StructureFileError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<AlgebraError>(m, "AlgebraError", PyExc_ValueError);

  m.def("evaluate", [](const std::string& text, const std::vector<std::string>& names, const std::vector<double>& x) {
    return parse(text, names)(x);
  }, py::arg("expr"), py::arg("names"), py::arg("point"));
  m.def("derivative", [](const std::string& text, const std::vector<std::string>& names, int i) {
    auto f = parse(text, names);
    return f.diff(i).str(names);
  }, py::arg("expr"), py::arg("names"), py::arg("index"));

  m.def("check_file", [](const std::string& path, std::uint64_t seed, double tol, int samples) {
    return report_dict(check_structure(load_structure(path), spec(seed, tol, samples)));
  }, py::arg("path"), py::arg("seed") = kDefaultSeed, py::arg("tol") = kDefaultTol,
        py::arg("samples") = kDefaultSampleCount);
  m.def("check_text", [](const std::string& text, std::uint64_t seed, double tol, int samples) {
    std::istringstream in(text);
    return report_dict(check_structure(parse_structure(in, "<string>"), spec(seed, tol, samples)));
  }, py::arg("text"), py::arg("seed") = kDefaultSeed, py::arg("tol") = kDefaultTol,
        py::arg("samples") = kDefaultSampleCount);
  m.def("run_catalog", [](const std::string& id, std::uint64_t seed, double tol, int samples) {
    return report_dict(run_catalog(id, spec(seed, tol, samples)));
  }, py::arg("id"), py::arg("seed") = kDefaultSeed, py::arg("tol") = kDefaultTol,
        py::arg("samples") = kDefaultSampleCount);
  m.def("catalog_ids", &catalog_ids);

  m.def("jj_verdicts", [](int dim, const std::map<std::tuple<int, int, int>, std::string>& c) {
    auto a = algebra(dim, c);
    auto pr = to_linear_structure(a);
    py::dict d;
    d["jacobi"] = is_jacobi_jordan(a).holds;
    d["associative"] = is_associative(a).holds;
    d["symmetric_poisson"] = is_symmetric_poisson(pr).holds;
    d["strong"] = is_strong(pr).holds;
    return d;
  }, py::arg("dim"), py::arg("constants"));
  m.def("export_jj", [](const std::string& id) {
    std::ostringstream os;
    write_structure(os, export_linear_structure(jj_entry(id).algebra, id));
    return os.str();
  }, py::arg("id"));

  m.def("hopf_matrix", &hopf_matrix, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("su2_flow", &su2_flow, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("q0"), py::arg("t"));

  m.def("integrate_file", [](const std::string& path, const std::vector<double>& x0, const std::vector<double>& p0,
                             double dt, std::size_t steps) {
    auto f = load_structure(path);
    if (!f.chart) throw StructureFileError(path + ": integrate needs a [chart]");
    Connection nabla = f.nabla ? *f.nabla : Connection(*f.chart);
    std::string h = f.hamiltonian.value_or("theta");
    PhaseField H = h == "theta" ? vertical_lift(f.pair().theta())
                                : PhaseField{*f.chart, phase_chart(*f.chart).parse(h).expr()};
    auto tr = integrate_pw(nabla, H, {x0, p0}, dt, steps);
    py::dict d;
    std::vector<double> t;
    std::vector<std::vector<double>> x, p;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      t.push_back(tr.time(i));
      x.push_back(tr.states[i].x);
      p.push_back(tr.states[i].p);
    }
    d["t"] = t;
    d["x"] = x;
    d["p"] = p;
    for (std::size_t c = 0; c < tr.channels.size(); ++c) d[py::str(tr.channel_names[c])] = tr.channels[c];
    return d;
  }, py::arg("path"), py::arg("x0"), py::arg("p0"), py::arg("dt"), py::arg("steps"));
}
