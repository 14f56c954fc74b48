#include "spg/structure_file.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace spg {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& src, const std::string& msg) {
  throw StructureFileError(src + ": " + msg);
}

std::string unquote(std::string v) {
  boost::algorithm::trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
  boost::algorithm::trim(v);
  return v;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, v, boost::algorithm::is_any_of(","));
  for (auto& p : parts) boost::algorithm::trim(p);
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

double to_number(const std::string& src, const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(src, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) fail(src, "expected a number, got '" + s + "'");
  return v;
}

int to_int(const std::string& src, const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(src, "expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& src, const std::string& s) {
  auto l = boost::algorithm::to_lower_copy(s);
  if (l == "true" || l == "yes" || l == "1") return true;
  if (l == "false" || l == "no" || l == "0") return false;
  fail(src, "expected true or false, got '" + s + "'");
}

// "theta[1, 2]" -> {0, 1}
std::vector<int> bracket_indices(const std::string& src, const std::string& key, const std::string& head, int arity,
                                 int n) {
  auto open = key.find('[');
  if (open == std::string::npos || key.back() != ']' || boost::algorithm::trim_copy(key.substr(0, open)) != head)
    fail(src, "unexpected key '" + key + "', expected " + head + "[...]");
  auto parts = split_list(key.substr(open + 1, key.size() - open - 2));
  if (static_cast<int>(parts.size()) != arity)
    fail(src, "key '" + key + "' needs " + std::to_string(arity) + " indices");
  std::vector<int> idx;
  for (const auto& p : parts) {
    int i = to_int(src, p);
    if (i < 1 || i > n) fail(src, "index " + p + " in '" + key + "' is outside 1.." + std::to_string(n));
    idx.push_back(i - 1);
  }
  return idx;
}

Expr parse_in(const std::string& src, const Chart& c, const std::string& key, const std::string& text) {
  try {
    return c.parse(text).expr();
  } catch (const ParseError& e) {
    fail(src, "cannot parse " + key + " = \"" + text + "\": " + e.what());
  }
}

Chart read_chart(const std::string& src, const pt::ptree& sec) {
  std::vector<std::string> names;
  std::map<std::string, std::pair<double, double>> boxes;
  std::optional<int> dim;
  for (const auto& [key, node] : sec) {
    auto v = unquote(node.data());
    if (key == "names") {
      names = split_list(v);
    } else if (key == "dim") {
      dim = to_int(src, v);
    } else if (key.rfind("box.", 0) == 0) {
      auto iv = split_list(v);
      if (iv.size() != 2) fail(src, key + " needs two numbers");
      boxes[key.substr(4)] = {to_number(src, iv[0]), to_number(src, iv[1])};
    } else {
      fail(src, "unknown key '" + key + "' in [chart]");
    }
  }
  if (names.empty()) {
    if (!dim) fail(src, "[chart] needs names or dim");
    names = default_names(*dim);
  }
  if (dim && *dim != static_cast<int>(names.size())) fail(src, "[chart] dim does not match names");
  for (const auto& nm : names)
    if (nm.empty() || !(std::isalpha(static_cast<unsigned char>(nm[0])) || nm[0] == '_'))
      fail(src, "bad coordinate name '" + nm + "'");
  std::vector<std::pair<double, double>> box(names.size(), {-1.0, 1.0});
  for (const auto& [nm, iv] : boxes) {
    auto it = std::find(names.begin(), names.end(), nm);
    if (it == names.end()) fail(src, "box for unknown coordinate '" + nm + "'");
    box[it - names.begin()] = iv;
  }
  try {
    return Chart(names, box);
  } catch (const GeometryError& e) {
    fail(src, e.what());
  }
}

std::string rat_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

SymPoissonPair StructureFile::pair() const {
  if (!theta) throw StructureFileError(source + ": no [theta] section");
  return SymPoissonPair(*theta, nabla ? *nabla : Connection(*chart));
}

StructureFile parse_structure(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(source, std::string("line ") + std::to_string(e.line()) + ": " + e.message());
  }
  StructureFile f;
  f.source = source;
  static const std::vector<std::string> known{"chart", "theta", "connection", "hamiltonian", "catalog", "expect",
                                              "probe"};
  for (const auto& [name, sec] : tree) {
    if (std::find(known.begin(), known.end(), name) == known.end()) fail(source, "unknown section [" + name + "]");
    if (!sec.data().empty()) fail(source, "key '" + name + "' outside any section");
  }
  if (auto sec = tree.get_child_optional("chart")) f.chart = read_chart(source, *sec);

  if (auto sec = tree.get_child_optional("catalog")) {
    for (const auto& [key, node] : *sec) {
      if (key != "ref") fail(source, "unknown key '" + key + "' in [catalog]");
      f.catalog = unquote(node.data());
    }
  }

  bool needs_chart = tree.get_child_optional("theta") || tree.get_child_optional("connection") ||
                     tree.get_child_optional("probe") || tree.get_child_optional("hamiltonian");
  if (needs_chart && !f.chart) fail(source, "missing [chart] section");
  if (!f.chart && !f.catalog) fail(source, "need a [chart] or a [catalog] reference");

  if (auto sec = tree.get_child_optional("theta")) {
    const Chart& c = *f.chart;
    SymTensorField th(c, 2);
    std::map<std::vector<int>, std::string> seen;
    for (const auto& [key, node] : *sec) {
      auto idx = bracket_indices(source, key, "theta", 2, c.n());
      auto text = unquote(node.data());
      Expr e = parse_in(source, c, key, text);
      auto sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (auto it = seen.find(sorted); it != seen.end() && it->second != text)
        fail(source, "conflicting entries for " + key);
      seen[sorted] = text;
      th.set(idx, e);
    }
    f.theta = th;
  }

  if (auto sec = tree.get_child_optional("connection")) {
    const Chart& c = *f.chart;
    Connection nb(c);
    for (const auto& [key, node] : *sec) {
      auto idx = bracket_indices(source, key, "gamma", 3, c.n());
      nb.set_symmetric(idx[0], idx[1], idx[2], parse_in(source, c, key, unquote(node.data())));
    }
    f.nabla = nb;
  }

  if (auto sec = tree.get_child_optional("hamiltonian")) {
    for (const auto& [key, node] : *sec) {
      if (key != "H") fail(source, "unknown key '" + key + "' in [hamiltonian]");
      f.hamiltonian = unquote(node.data());
      if (*f.hamiltonian != "theta") parse_in(source, phase_chart(*f.chart), key, *f.hamiltonian);
    }
  }

  if (auto sec = tree.get_child_optional("expect")) {
    for (const auto& [key, node] : *sec) {
      bool v = to_bool(source, unquote(node.data()));
      if (key == "sp" || key == "symmetric_poisson") {
        f.expect.symmetric_poisson = v;
      } else if (key == "strong") {
        f.expect.strong = v;
      } else if (key == "parallel") {
        f.expect.parallel = v;
      } else if (key == "involutive") {
        f.expect.involutive = v;
      } else {
        fail(source, "unknown expectation '" + key + "'");
      }
    }
  }

  if (auto sec = tree.get_child_optional("probe")) {
    std::map<std::string, Probe> probes;
    std::vector<std::string> order;
    auto get = [&](const std::string& nm) -> Probe& {
      if (!probes.count(nm)) {
        order.push_back(nm);
        probes[nm].name = nm;
      }
      return probes[nm];
    };
    for (const auto& [key, node] : *sec) {
      auto v = unquote(node.data());
      auto dot = key.find('.');
      if (dot == std::string::npos) {
        auto& p = get(key);
        for (const auto& s : split_list(v)) p.point.push_back(to_number(source, s));
        if (static_cast<int>(p.point.size()) != f.chart->n()) fail(source, "probe " + key + " has the wrong dimension");
        continue;
      }
      auto& p = get(key.substr(0, dot));
      auto field = key.substr(dot + 1);
      if (field == "rank") {
        p.rank = to_int(source, v);
      } else if (field == "signature") {
        auto pq = split_list(v);
        if (pq.size() != 2) fail(source, key + " needs two integers");
        p.signature = std::pair{to_int(source, pq[0]), to_int(source, pq[1])};
      } else {
        fail(source, "unknown probe field '" + key + "'");
      }
    }
    for (const auto& nm : order) {
      if (probes[nm].point.empty()) fail(source, "probe " + nm + " has no point");
      f.probes.push_back(probes[nm]);
    }
  }
  return f;
}

StructureFile load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructureFileError(path + ": cannot open");
  return parse_structure(in, path);
}

void write_structure(std::ostream& out, const StructureFile& f) {
  auto q = [](const std::string& s) { return "\"" + s + "\""; };
  if (f.chart) {
    const Chart& c = *f.chart;
    out << "[chart]\nnames = " << q(boost::algorithm::join(c.names(), ", ")) << "\n";
    char buf[64];
    for (int i = 0; i < c.n(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g, %.17g", c.box()[i].first, c.box()[i].second);
      out << "box." << c.names()[i] << " = " << q(buf) << "\n";
    }
  }
  if (f.catalog) out << "\n[catalog]\nref = " << q(*f.catalog) << "\n";
  if (f.theta) {
    out << "\n[theta]\n";
    for (const auto& idx : f.theta->sorted_indices()) {
      const Expr& e = f.theta->at(idx);
      if (e.is_zero()) continue;
      out << "theta[" << idx[0] + 1 << "," << idx[1] + 1 << "] = " << q(e.str(f.chart->names())) << "\n";
    }
    // an empty section would not survive re-reading
    if (f.theta->is_structurally_zero()) out << "theta[1,1] = \"0\"\n";
  }
  if (f.nabla) {
    int n = f.nabla->n();
    bool any = false;
    for (int k = 0; k < n * n * n; ++k) any = any || !f.nabla->gamma(k / (n * n), k / n % n, k % n).is_zero();
    if (any) out << "\n[connection]\n";
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Expr& e = f.nabla->gamma(k, i, j);
          if (e.is_zero()) continue;
          out << "gamma[" << k + 1 << "," << i + 1 << "," << j + 1 << "] = " << q(e.str(f.chart->names())) << "\n";
        }
  }
  if (f.hamiltonian) out << "\n[hamiltonian]\nH = " << q(*f.hamiltonian) << "\n";
  const auto& x = f.expect;
  if (x.symmetric_poisson || x.strong || x.parallel || x.involutive) {
    out << "\n[expect]\n";
    auto b = [&](const char* k, const std::optional<bool>& v) {
      if (v) out << k << " = " << (*v ? "true" : "false") << "\n";
    };
    b("sp", x.symmetric_poisson);
    b("strong", x.strong);
    b("parallel", x.parallel);
    b("involutive", x.involutive);
  }
  if (!f.probes.empty()) {
    out << "\n[probe]\n";
    for (const auto& p : f.probes) {
      std::vector<std::string> coords;
      char buf[32];
      for (double v : p.point) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        coords.push_back(buf);
      }
      out << p.name << " = " << q(boost::algorithm::join(coords, ", ")) << "\n";
      if (p.rank) out << p.name << ".rank = " << *p.rank << "\n";
      if (p.signature) out << p.name << ".signature = \"" << p.signature->first << ", " << p.signature->second << "\"\n";
    }
  }
}

StructureFile export_linear_structure(const CommutativeAlgebra& a, const std::string& id) {
  StructureFile f;
  f.source = id.empty() ? "<export>" : id;
  Chart c = linear_chart(a.dim());
  f.chart = c;
  if (!id.empty()) f.catalog = "jj:" + id;
  // Text with exact rational coefficients so the re-import recovers them through to_rational.
  SymTensorField th(c, 2);
  std::ostringstream body;
  int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string text;
      for (int k = 0; k < n; ++k) {
        const Rational& r = a.c(k, i, j);
        if (r.numerator() == 0) continue;
        if (!text.empty()) text += " + ";
        text += "(" + rat_text(r) + ")*" + c.names()[k];
      }
      if (!text.empty()) th.set({i, j}, c.parse(text).expr());
    }
  f.theta = th;
  f.nabla = Connection(c);
  return f;
}

}  // namespace spg
