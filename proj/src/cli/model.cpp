#include "acp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace acp {

namespace {

namespace pt = boost::property_tree;

const char* const kSections[] = {"model", "connection", "kappa", "beta", "gauge", "certificate", "sampling", "tolerances"};

std::string gamma_key(int i, int a) { return "gamma" + std::to_string(i + 1) + "_" + std::to_string(a + 1); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// 1-based line of `key` inside `[section]`, or of the section header when
// key is empty; 0 if not found.
int line_of(const std::string& text, const std::string& section, const std::string& key = "") {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  bool inside = false;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[') {
      inside = t == "[" + section + "]";
      if (inside && key.empty()) return n;
      continue;
    }
    if (inside && t.rfind(key, 0) == 0 && trim(t.substr(key.size())).rfind('=', 0) == 0) return n;
  }
  return 0;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {
    std::istringstream in(text);
    try {
      pt::ini_parser::read_ini(in, tree_);
    } catch (const pt::ini_parser_error& e) {
      throw ParseError(static_cast<int>(e.line()), e.message());
    }
    for (const auto& [name, sec] : tree_) {
      if (sec.empty() && !sec.data().empty())
        throw ParseError(line_of_key_anywhere(name), "key '" + name + "' outside of a section");
      if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections))
        throw ParseError(line_of(text_, name), "unknown section [" + name + "]");
    }
  }

  bool has(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

  const pt::ptree& section(const std::string& s) const {
    const auto it = tree_.find(s);
    if (it == tree_.not_found()) throw MissingSection(s);
    return it->second;
  }

  void only_keys(const std::string& s, const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : section(s)) {
      (void)v;
      if (!allowed.count(k)) throw ParseError(line_of(text_, s, k), "unknown key '" + k + "' in [" + s + "]");
    }
  }

  std::optional<std::string> get(const std::string& s, const std::string& key) const {
    if (!has(s)) return std::nullopt;
    const auto v = section(s).get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::string require(const std::string& s, const std::string& key) const {
    auto v = get(s, key);
    if (!v) throw ParseError(line_of(text_, s), "[" + s + "] needs '" + key + "'");
    return *v;
  }

  Expression expr(const std::string& s, const std::string& key, const std::string& text) const {
    try {
      return parse(text);
    } catch (const InputError& e) {
      throw ParseError(line_of(text_, s, key), key + ": " + e.what());
    }
  }

  double real(const std::string& s, const std::string& key, const std::string& text) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(line_of(text_, s, key), key + ": expected a number, got '" + text + "'");
  }

  long long integer(const std::string& s, const std::string& key, const std::string& text) const {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(line_of(text_, s, key), key + ": expected an integer, got '" + text + "'");
  }

  int line(const std::string& s, const std::string& key) const { return line_of(text_, s, key); }

 private:
  int line_of_key_anywhere(const std::string& key) const {
    std::istringstream in(text_);
    std::string l;
    int n = 0;
    while (std::getline(in, l))
      if (++n, trim(l).rfind(key, 0) == 0) return n;
    return 0;
  }

  const std::string& text_;
  pt::ptree tree_;
};

// "[lo, hi] [lo, hi] ..." with five intervals.
Box parse_box(const std::string& text, int line) {
  Box b{};
  std::istringstream in(text);
  for (int k = 0; k < kDim; ++k) {
    char open = 0, comma = 0, close = 0;
    double lo = 0.0, hi = 0.0;
    if (!(in >> open >> lo >> comma >> hi >> close) || open != '[' || comma != ',' || close != ']')
      throw BadInterval("line " + std::to_string(line) + ": box needs five intervals [lo, hi]");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw BadInterval("line " + std::to_string(line) + ": interval " + std::to_string(k + 1) + " is empty");
    b[static_cast<std::size_t>(k)] = {lo, hi};
  }
  std::string rest;
  if (in >> rest) throw BadInterval("line " + std::to_string(line) + ": trailing text after five intervals");
  return b;
}

DifferentiableField field(const Expression& e) { return DifferentiableField(e); }

}  // namespace

ModelFile parse_model(const std::string& text) {
  const Reader r(text);
  ModelFile m;
  const Expression zero = parse("0");

  r.only_keys("model", {"name"});
  m.name = r.require("model", "name");

  for (auto& row : m.gamma) row.fill(zero);
  if (r.has("connection")) {
    std::set<std::string> keys;
    for (int i = 0; i < kBaseDim; ++i)
      for (int a = 0; a < kFiberDim; ++a) keys.insert(gamma_key(i, a));
    r.only_keys("connection", keys);
    for (int i = 0; i < kBaseDim; ++i)
      for (int a = 0; a < kFiberDim; ++a)
        if (auto v = r.get("connection", gamma_key(i, a))) m.gamma[i][a] = r.expr("connection", gamma_key(i, a), *v);
  }

  r.only_keys("kappa", {"expr"});
  m.kappa = r.expr("kappa", "expr", r.require("kappa", "expr"));

  r.only_keys("beta", {"beta1", "beta2", "beta3"});
  for (int a = 0; a < kFiberDim; ++a) {
    const std::string key = "beta" + std::to_string(a + 1);
    m.beta[a] = r.expr("beta", key, r.require("beta", key));
  }

  if (r.has("gauge")) {
    r.only_keys("gauge", {"mu1", "mu2", "c", "epsilon"});
    ModelFile::Gauge g;
    for (int i = 0; i < kBaseDim; ++i) {
      const std::string key = "mu" + std::to_string(i + 1);
      g.mu[i] = r.expr("gauge", key, r.get("gauge", key).value_or("0"));
    }
    g.c = r.expr("gauge", "c", r.get("gauge", "c").value_or("0"));
    if (auto e = r.get("gauge", "epsilon")) g.epsilon = r.real("gauge", "epsilon", *e);
    m.gauge = g;
  }

  if (r.has("certificate")) {
    r.only_keys("certificate", {"h", "K", "kappa0"});
    ModelFile::Certificate c;
    if (auto h = r.get("certificate", "h")) c.h = r.expr("certificate", "h", *h);
    if (auto k = r.get("certificate", "K")) {
      if (*k == "auto")
        c.auto_K = true;
      else
        c.K = r.expr("certificate", "K", *k);
    }
    if (auto k0 = r.get("certificate", "kappa0")) c.kappa0 = r.expr("certificate", "kappa0", *k0);
    m.certificate = c;
  }

  if (r.has("sampling")) {
    r.only_keys("sampling", {"box", "generator", "resolution", "seed"});
    if (auto b = r.get("sampling", "box")) m.box = parse_box(*b, r.line("sampling", "box"));
    if (auto g = r.get("sampling", "generator")) {
      if (*g == "grid")
        m.generator = Generator::Grid;
      else if (*g == "halton")
        m.generator = Generator::Halton;
      else
        throw ParseError(r.line("sampling", "generator"), "generator must be grid or halton");
    }
    if (auto n = r.get("sampling", "resolution")) {
      const long long v = r.integer("sampling", "resolution", *n);
      if (v < 1 || v > 100000000) throw ParseError(r.line("sampling", "resolution"), "resolution out of range");
      m.resolution = static_cast<int>(v);
    }
    if (auto s = r.get("sampling", "seed")) {
      const long long v = r.integer("sampling", "seed", *s);
      if (v < 0) throw ParseError(r.line("sampling", "seed"), "seed must be non-negative");
      m.seed = static_cast<std::uint64_t>(v);
    }
  }

  if (r.has("tolerances")) {
    const std::pair<const char*, double Tolerances::*> entries[] = {
        {"identity", &Tolerances::identity},
        {"oracle", &Tolerances::oracle},
        {"conservation", &Tolerances::conservation},
        {"finite_difference", &Tolerances::finite_difference},
        {"kappa_relative", &Tolerances::kappa_relative},
        {"beta_relative", &Tolerances::beta_relative}};
    std::set<std::string> keys;
    for (const auto& [k, ptr] : entries) keys.insert(k);
    r.only_keys("tolerances", keys);
    for (const auto& [k, ptr] : entries)
      if (auto v = r.get("tolerances", k)) {
        const double x = r.real("tolerances", k, *v);
        if (!(x > 0.0)) throw ParseError(r.line("tolerances", k), std::string(k) + " must be positive");
        m.tol.*ptr = x;
      }
  }
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::string format_model(const ModelFile& m) {
  std::ostringstream os;
  os << "[model]\nname = " << m.name << "\n\n[connection]\n";
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a) os << gamma_key(i, a) << " = " << m.gamma[i][a].print() << "\n";
  os << "\n[kappa]\nexpr = " << m.kappa.print() << "\n\n[beta]\n";
  for (int a = 0; a < kFiberDim; ++a) os << "beta" << a + 1 << " = " << m.beta[a].print() << "\n";
  if (m.gauge) {
    os << "\n[gauge]\nmu1 = " << m.gauge->mu[0].print() << "\nmu2 = " << m.gauge->mu[1].print()
       << "\nc = " << m.gauge->c.print() << "\nepsilon = " << format_real(m.gauge->epsilon) << "\n";
  }
  if (m.certificate) {
    os << "\n[certificate]\n";
    if (m.certificate->h) os << "h = " << m.certificate->h->print() << "\n";
    if (m.certificate->auto_K)
      os << "K = auto\n";
    else if (m.certificate->K)
      os << "K = " << m.certificate->K->print() << "\n";
    if (m.certificate->kappa0) os << "kappa0 = " << m.certificate->kappa0->print() << "\n";
  }
  os << "\n[sampling]\nbox =";
  for (const Interval& iv : m.box) os << " [" << format_real(iv.lo) << ", " << format_real(iv.hi) << "]";
  os << "\ngenerator = " << generator_name(m.generator) << "\nresolution = " << m.resolution
     << "\nseed = " << m.seed << "\n\n[tolerances]\n";
  os << "identity = " << format_real(m.tol.identity) << "\noracle = " << format_real(m.tol.oracle)
     << "\nconservation = " << format_real(m.tol.conservation)
     << "\nfinite_difference = " << format_real(m.tol.finite_difference)
     << "\nkappa_relative = " << format_real(m.tol.kappa_relative)
     << "\nbeta_relative = " << format_real(m.tol.beta_relative) << "\n";
  return os.str();
}

void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file '" + path + "'");
  out << format_model(m);
  if (!out) throw InputError("failed writing '" + path + "'");
}

PoissonTriple base_triple(const ModelFile& m) {
  PoissonTriple t;
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a) t.gamma.gamma[i][a] = field(m.gamma[i][a]);
  t.kappa = field(m.kappa);
  for (int a = 0; a < kFiberDim; ++a) t.beta[a] = field(m.beta[a]);
  return t;
}

GaugeData gauge_data(const ModelFile& m) {
  if (!m.gauge) throw InputError("model '" + m.name + "' has no [gauge] block");
  GaugeData g;
  for (int i = 0; i < kBaseDim; ++i) g.mu[i] = field(m.gauge->mu[i]);
  g.c = field(m.gauge->c);
  g.epsilon = m.gauge->epsilon;
  return g;
}

PoissonTriple model_triple(const ModelFile& m) {
  const PoissonTriple base = base_triple(m);
  if (!m.gauge) return base;
  const GaugeData g = gauge_data(m);
  return family(base, g, g.epsilon);
}

UnimodularityCertificate model_certificate(const ModelFile& m) {
  if (!m.certificate) throw MissingCertificate("model '" + m.name + "' has no [certificate] block");
  UnimodularityCertificate c;
  if (m.certificate->h) c.h = field(*m.certificate->h);
  if (m.certificate->kappa0) c.kappa0 = field(*m.certificate->kappa0);
  if (m.certificate->auto_K) {
    if (!m.gauge) throw MissingCertificate("K = auto needs a [gauge] block");
    const PoissonTriple base = base_triple(m);
    const GaugeData g = gauge_data(m);
    c.K = DifferentiableField::constant(1.0) / domain_denominator(base, g, g.epsilon);
    if (!c.kappa0) c.kappa0 = base.kappa;
  } else if (m.certificate->K) {
    c.K = field(*m.certificate->K);
  }
  return c;
}

SampleSet model_samples(const ModelFile& m) { return sample_box(m.box, m.generator, m.resolution, m.seed); }

}  // namespace acp
