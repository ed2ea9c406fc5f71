#include "lowmach/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lowmach/errors.hpp"

namespace lowmach {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw InvalidParameter("config: " + key + " = '" + v + "' is not a number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0') throw InvalidParameter("config: " + key + " = '" + v + "' is not an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidParameter("config: " + key + " = '" + v + "' is not a boolean");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ForcingMode parse_mode(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 6) throw InvalidParameter("config: forcing mode '" + s + "' needs target:comp:kx:ky:re:im");
  ForcingMode m;
  if (parts[0] != "f" && parts[0] != "g") throw InvalidParameter("config: forcing mode target must be f or g");
  m.target = parts[0][0];
  if (parts[1] == "x")
    m.comp = 0;
  else if (parts[1] == "y")
    m.comp = 1;
  else
    throw InvalidParameter("config: forcing mode component must be x or y");
  m.kx = static_cast<int>(to_int("forcing_modes", parts[2]));
  m.ky = static_cast<int>(to_int("forcing_modes", parts[3]));
  m.re = to_double("forcing_modes", parts[4]);
  m.im = to_double("forcing_modes", parts[5]);
  return m;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto dbl = [](double RunConfig::*m) {
    return Setter([m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); });
  };
  auto integer = [](int RunConfig::*m) {
    return Setter(
        [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = static_cast<int>(to_int(k, v)); });
  };
  auto str = [](std::string RunConfig::*m) {
    return Setter([m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; });
  };
  static const std::map<std::string, Setter> table{
      {"n", integer(&RunConfig::n)},
      {"dealias_fraction", dbl(&RunConfig::dealias_fraction)},
      {"mu", dbl(&RunConfig::mu)},
      {"lambda", dbl(&RunConfig::lambda)},
      {"kappa", dbl(&RunConfig::kappa)},
      {"eps", dbl(&RunConfig::eps)},
      {"eps_list",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.eps_list.clear();
         for (const auto& item : split(v, ','))
           if (!item.empty()) c.eps_list.push_back(to_double(k, item));
       }},
      {"forcing", str(&RunConfig::forcing)},
      {"forcing_amplitude", dbl(&RunConfig::forcing_amplitude)},
      {"forcing_k", integer(&RunConfig::forcing_k)},
      {"forcing_modes",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.forcing_modes.clear();
         for (const auto& item : split(v, ','))
           if (!item.empty()) c.forcing_modes.push_back(parse_mode(item));
       }},
      {"tol", dbl(&RunConfig::tol)},
      {"max_outer", integer(&RunConfig::max_outer)},
      {"max_inner", integer(&RunConfig::max_inner)},
      {"omega", dbl(&RunConfig::omega)},
      {"delta", dbl(&RunConfig::delta)},
      {"a0", dbl(&RunConfig::a0)},
      {"E", dbl(&RunConfig::E)},
      {"eps0", dbl(&RunConfig::eps0)},
      {"lin_gate", dbl(&RunConfig::lin_gate)},
      {"seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long long s = to_int(k, v);
         if (s < 0) throw InvalidParameter("config: seed must be non-negative");
         c.seed = static_cast<unsigned long long>(s);
       }},
      {"workers", integer(&RunConfig::workers)},
      {"trials", integer(&RunConfig::trials)},
      {"mms_case", str(&RunConfig::mms_case)},
      {"timing", [](RunConfig& c, const std::string& k, const std::string& v) { c.timing = to_bool(k, v); }},
      {"out", str(&RunConfig::out)},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw InvalidParameter("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw InvalidParameter("config: duplicate key '" + key + "'");
    it->second(c, key, value);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
  };
  std::string modes;
  for (std::size_t i = 0; i < c.forcing_modes.size(); ++i) {
    const ForcingMode& m = c.forcing_modes[i];
    modes += (i ? ", " : "") + std::string(1, m.target) + ":" + (m.comp == 0 ? "x" : "y") + ":" + std::to_string(m.kx) +
             ":" + std::to_string(m.ky) + ":" + fmt(m.re) + ":" + fmt(m.im);
  }
  o << "n = " << c.n << '\n'
    << "dealias_fraction = " << fmt(c.dealias_fraction) << '\n'
    << "mu = " << fmt(c.mu) << '\n'
    << "lambda = " << fmt(c.lambda) << '\n'
    << "kappa = " << fmt(c.kappa) << '\n'
    << "eps = " << fmt(c.eps) << '\n'
    << "eps_list = " << list(c.eps_list) << '\n'
    << "forcing = " << c.forcing << '\n'
    << "forcing_amplitude = " << fmt(c.forcing_amplitude) << '\n'
    << "forcing_k = " << c.forcing_k << '\n'
    << "forcing_modes = " << modes << '\n'
    << "tol = " << fmt(c.tol) << '\n'
    << "max_outer = " << c.max_outer << '\n'
    << "max_inner = " << c.max_inner << '\n'
    << "omega = " << fmt(c.omega) << '\n'
    << "delta = " << fmt(c.delta) << '\n'
    << "a0 = " << fmt(c.a0) << '\n'
    << "E = " << fmt(c.E) << '\n'
    << "eps0 = " << fmt(c.eps0) << '\n'
    << "lin_gate = " << fmt(c.lin_gate) << '\n'
    << "seed = " << c.seed << '\n'
    << "workers = " << c.workers << '\n'
    << "trials = " << c.trials << '\n'
    << "mms_case = " << c.mms_case << '\n'
    << "timing = " << (c.timing ? "true" : "false") << '\n'
    << "out = " << c.out << '\n';
  return o.str();
}

void RunConfig::validate() const {
  Grid(n, dealias_fraction);
  params(eps).validate();
  for (double e : eps_list) params(e).validate();
  if (!(tol > 0.0)) throw InvalidParameter("config: tol > 0 violated");
  if (max_outer < 1 || max_inner < 1) throw InvalidParameter("config: iteration limits must be >= 1");
  if (!(omega > 0.0 && omega <= 1.0)) throw InvalidParameter("config: omega in (0, 1] violated");
  if (!(delta >= 0.0)) throw InvalidParameter("config: delta >= 0 violated");
  if (!(a0 > 0.0) || !(E > 0.0) || !(eps0 > 0.0) || !(lin_gate > 0.0))
    throw InvalidParameter("config: gates a0, E, eps0, lin_gate must be > 0");
  if (workers < 1) throw InvalidParameter("config: workers >= 1 violated");
  if (trials < 1) throw InvalidParameter("config: trials >= 1 violated");
  if (!std::isfinite(forcing_amplitude)) throw InvalidParameter("config: forcing_amplitude must be finite");
  if (forcing != "taylor_green" && forcing != "kolmogorov" && forcing != "modes" && forcing != "zero")
    throw InvalidParameter("config: unknown forcing preset '" + forcing + "'");
  if (mms_case != "taylor_green" && mms_case != "gradient_force" && mms_case != "stokes_shear")
    throw InvalidParameter("config: unknown mms_case '" + mms_case + "'");
  if (forcing == "kolmogorov" && (forcing_k < 1 || forcing_k >= n / 2))
    throw InvalidParameter("config: forcing_k must be in [1, n/2)");

  // Real forcing: every listed coefficient needs its conjugate partner.
  for (const ForcingMode& m : forcing_modes) {
    if (std::abs(m.kx) >= n / 2 || std::abs(m.ky) >= n / 2)
      throw InvalidParameter("config: forcing mode (" + std::to_string(m.kx) + ", " + std::to_string(m.ky) +
                             ") is not below the Nyquist wavenumber");
    if (!std::isfinite(m.re) || !std::isfinite(m.im)) throw InvalidParameter("config: forcing mode is not finite");
    if (m.kx == 0 && m.ky == 0 && m.im != 0.0)
      throw InvalidParameter("config: forcing modes violate Hermitian symmetry (k = 0 must be real)");
    bool partnered = false;
    int count = 0;
    for (const ForcingMode& q : forcing_modes) {
      if (q.target == m.target && q.comp == m.comp && q.kx == m.kx && q.ky == m.ky) ++count;
      if (q.target == m.target && q.comp == m.comp && q.kx == -m.kx && q.ky == -m.ky && q.re == m.re && q.im == -m.im)
        partnered = true;
    }
    if (count > 1) throw InvalidParameter("config: forcing mode listed twice");
    if (!partnered)
      throw InvalidParameter("config: forcing modes violate Hermitian symmetry at (" + std::to_string(m.kx) + ", " +
                             std::to_string(m.ky) + ")");
  }
}

Grid RunConfig::grid() const { return Grid(n, dealias_fraction); }

FluidParams RunConfig::params(double eps_value) const {
  FluidParams p;
  p.mu = mu;
  p.lambda = lambda;
  p.kappa = kappa;
  p.eps = eps_value;
  return p;
}

FixedPointOptions RunConfig::solver_options(bool force) const {
  FixedPointOptions o;
  o.stokes.max_iter = max_inner;
  o.linearized.max_iter = max_inner;
  o.linearized.delta = delta;
  o.linearized.gate = lin_gate;
  o.tol = tol;
  o.max_outer = max_outer;
  o.omega = omega;
  o.a0 = a0;
  o.E = E;
  o.eps0 = eps0;
  o.force = force;
  o.probe_trials = trials;
  o.seed = seed;
  return o;
}

VectorField taylor_green_forcing(const Grid& grid, double amplitude) {
  return VectorField(Field::sample(grid, [&](double x, double y) { return amplitude * std::sin(x) * std::cos(y); }),
                     Field::sample(grid, [&](double x, double y) { return -amplitude * std::cos(x) * std::sin(y); }));
}

VectorField kolmogorov_forcing(const Grid& grid, double amplitude, int k) {
  return VectorField(Field::sample(grid, [&](double, double y) { return amplitude * std::sin(k * y); }), Field(grid));
}

std::pair<VectorField, VectorField> RunConfig::forcing_fields(const Grid& g) const {
  VectorField f(g), gg(g);
  if (forcing == "taylor_green") {
    f = taylor_green_forcing(g, forcing_amplitude);
  } else if (forcing == "kolmogorov") {
    f = kolmogorov_forcing(g, forcing_amplitude, forcing_k);
  } else if (forcing == "modes") {
    for (const ForcingMode& m : forcing_modes) {
      VectorField& dst = m.target == 'f' ? f : gg;
      dst[m.comp].set_mode(m.kx, m.ky, Complex(m.re, m.im));
    }
  }
  return {std::move(f), std::move(gg)};
}

}  // namespace lowmach
