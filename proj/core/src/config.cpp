#include "cdflow/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cdflow/errors.hpp"

namespace cdflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
  size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': not a number: '" + v + "'");
  }
  if (used != v.size())
    fail(origin, line, "key '" + key + "': trailing text in '" + v + "'");
  return out;
}

int parse_int(const std::string& origin, int line, const std::string& key,
              const std::string& v) {
  size_t used = 0;
  int out;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': not an integer: '" + v + "'");
  }
  if (used != v.size())
    fail(origin, line, "key '" + key + "': trailing text in '" + v + "'");
  return out;
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

Basis parse_basis(const std::string& origin, int line, const std::string& name) {
  if (name == "cosine") return Basis::cosine;
  if (name == "poly_even") return Basis::poly_even;
  if (name == "poly") return Basis::poly;
  fail(origin, line, "unknown basis '" + name +
                         "' (expected cosine, poly_even or poly)");
}

// "basis:mode:coeff, basis:mode:coeff, ..." possibly empty.
std::vector<PerturbationTerm> parse_terms(const std::string& origin, int line,
                                          const std::string& key,
                                          const std::string& v) {
  std::vector<PerturbationTerm> terms;
  if (trim(v).empty()) return terms;
  for (const auto& part : split(v, ',')) {
    const auto f = split(part, ':');
    if (f.size() != 3)
      fail(origin, line,
           "key '" + key + "': term '" + part + "' is not basis:mode:coeff");
    PerturbationTerm t;
    t.basis = parse_basis(origin, line, f[0]);
    t.mode = parse_int(origin, line, key, f[1]);
    t.coeff = parse_double(origin, line, key, f[2]);
    terms.push_back(t);
  }
  return terms;
}

}  // namespace

SolveConfig parse_config_text(const std::string& text,
                              const std::string& origin) {
  SolveConfig c;
  c.source_text = text;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find_first_of("#;");
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "gas" && section != "background" && section != "domain" &&
          section != "grid" && section != "perturbation" &&
          section != "tolerances" && section != "run" && section != "sweep" &&
          section != "convergence")
        fail(origin, line, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(origin, line, "expected key = value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (section.empty())
      fail(origin, line, "key '" + key + "' appears before any section");

    auto num = [&] { return parse_double(origin, line, key, val); };
    auto integer = [&] { return parse_int(origin, line, key, val); };

    if (section == "gas") {
      if (key == "gamma") c.gas.gamma = num();
      else if (key == "entropy_scale") c.gas.entropy_scale = num();
      else fail(origin, line, "unknown key '" + key + "' in [gas]");
    } else if (section == "background") {
      if (key == "rho_minus") c.rho_minus = num();
      else if (key == "p") c.p = num();
      else if (key == "rho_plus") c.rho_plus = num();
      else fail(origin, line, "unknown key '" + key + "' in [background]");
    } else if (section == "domain") {
      if (key == "length") c.length = num();
      else fail(origin, line, "unknown key '" + key + "' in [domain]");
    } else if (section == "grid") {
      if (key == "n1") c.n1 = integer();
      else if (key == "n2") c.n2 = integer();
      else fail(origin, line, "unknown key '" + key + "' in [grid]");
    } else if (section == "perturbation") {
      if (key == "sigma" || key == "amplitude") c.amplitude = num();
      else if (key == "holder_alpha") c.holder_alpha = num();
      else if (key == "j") c.family.j = parse_terms(origin, line, key, val);
      else if (key == "nu") c.family.nu = parse_terms(origin, line, key, val);
      else if (key == "a") c.family.a = parse_terms(origin, line, key, val);
      else if (key == "b") c.family.b = parse_terms(origin, line, key, val);
      else fail(origin, line, "unknown key '" + key + "' in [perturbation]");
    } else if (section == "tolerances") {
      if (key == "inner_tol") c.inner_tol = num();
      else if (key == "outer_tol") c.outer_tol = num();
      else if (key == "inner_max_iter") c.inner_max_iter = integer();
      else if (key == "outer_max_iter") c.outer_max_iter = integer();
      else if (key == "damping") c.damping = num();
      else if (key == "rho_lo_factor") c.ball.rho_lo_factor = num();
      else if (key == "rho_hi_factor") c.ball.rho_hi_factor = num();
      else if (key == "mach_sq_max") c.ball.mach_sq_max = num();
      else if (key == "jacobian_floor") c.ball.jacobian_floor = num();
      else fail(origin, line, "unknown key '" + key + "' in [tolerances]");
    } else if (section == "run") {
      if (key == "mode") {
        if (val != "solve" && val != "sweep" && val != "convergence" &&
            val != "verify")
          fail(origin, line, "unknown run mode '" + val + "'");
        c.mode = val;
      } else if (key == "output") {
        c.output = val;
      } else {
        fail(origin, line, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "sweep") {
      if (key == "sigmas") {
        c.sweep_sigmas.clear();
        for (const auto& part : split(val, ','))
          c.sweep_sigmas.push_back(parse_double(origin, line, key, part));
      } else {
        fail(origin, line, "unknown key '" + key + "' in [sweep]");
      }
    } else {  // convergence
      if (key == "grids") {
        c.convergence_grids.clear();
        for (const auto& part : split(val, ','))
          c.convergence_grids.push_back(parse_int(origin, line, key, part));
      } else {
        fail(origin, line, "unknown key '" + key + "' in [convergence]");
      }
    }
  }
  return c;
}

SolveConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::uint64_t config_hash(const SolveConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : c.source_text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cdflow
