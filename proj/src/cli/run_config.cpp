#include <charconv>
#include <cstdio>
#include <sstream>

#include "ptdyn/cli.hpp"

namespace ptdyn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || p != last) throw ConfigError("bad number for " + key + ": '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || p != last) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "omega0") c.omega0 = to_double(key, v);
  else if (key == "kappa") c.kappa = to_double(key, v);
  else if (key == "epsilon") c.epsilon = to_double(key, v);
  else if (key == "alpha") c.alpha = to_double(key, v);
  else if (key == "beta") c.beta = to_double(key, v);
  else if (key == "dim") c.dim = to_long(key, v);
  else if (key == "tmax") c.tmax = to_double(key, v);
  else if (key == "dt") c.dt = to_double(key, v);
  else if (key == "sweep_param") c.sweep_param = v;
  else if (key == "sweep_min") c.sweep_min = to_double(key, v);
  else if (key == "sweep_max") c.sweep_max = to_double(key, v);
  else if (key == "sweep_steps") c.sweep_steps = to_long(key, v);
  else if (key == "out") c.out = v;
  else if (key == "format") c.format = v;
  else if (key == "allow_ep") c.allow_ep = to_bool(key, v);
  else if (key == "threads") c.threads = to_long(key, v);
  else if (key == "corrupt_metric") c.corrupt_metric = to_bool(key, v);
  else if (key == "mu_sign") c.mu_sign = to_double(key, v);
  else throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    set_key(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

std::string canonical(const RunConfig& c) {
  std::ostringstream o;
  o << "omega0=" << g17(c.omega0) << "\n"
    << "kappa=" << g17(c.kappa) << "\n"
    << "epsilon=" << g17(c.epsilon) << "\n"
    << "alpha=" << g17(c.alpha) << "\n"
    << "beta=" << g17(c.beta) << "\n"
    << "dim=" << c.dim << "\n"
    << "tmax=" << g17(c.tmax) << "\n"
    << "dt=" << g17(c.dt) << "\n"
    << "sweep_param=" << c.sweep_param << "\n"
    << "sweep_min=" << g17(c.sweep_min) << "\n"
    << "sweep_max=" << g17(c.sweep_max) << "\n"
    << "sweep_steps=" << c.sweep_steps << "\n"
    << "out=" << c.out << "\n"
    << "format=" << c.format << "\n"
    << "allow_ep=" << (c.allow_ep ? "true" : "false") << "\n"
    << "threads=" << c.threads << "\n"
    << "corrupt_metric=" << (c.corrupt_metric ? "true" : "false") << "\n"
    << "mu_sign=" << g17(c.mu_sign) << "\n";
  return o.str();
}

CasimirParams params_of(const RunConfig& c) {
  CasimirParams p;
  p.omega0 = c.omega0;
  p.kappa = c.kappa;
  p.epsilon = c.epsilon;
  p.alpha = c.alpha;
  p.beta = c.beta;
  return p;
}

void validate(const RunConfig& c) {
  try {
    params_of(c).validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (!(c.alpha > 0.0) || !(c.beta > 0.0)) throw ConfigError("alpha and beta must be positive for a metric");
  if (c.dim < 2 || c.dim > 4096) throw ConfigError("dim must lie in [2, 4096]");
  if (!(c.tmax > 0.0)) throw ConfigError("tmax must be positive");
  if (!(c.dt > 0.0) || c.dt > c.tmax) throw ConfigError("dt must lie in (0, tmax]");
  if (c.tmax / c.dt > 1e6) throw ConfigError("time grid too large");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  if (c.sweep_param != "g" && c.sweep_param != "delta") throw ConfigError("sweep_param must be g or delta");
  if (c.threads < 1 || c.threads > 256) throw ConfigError("threads must lie in [1, 256]");
  if (c.mu_sign != 1.0 && c.mu_sign != -1.0) throw ConfigError("mu_sign must be +1 or -1");
}

}  // namespace ptdyn::cli
