#include "hvp/config.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "hvp/io.hpp"
#include "hvp/norms.hpp"

namespace hvp {

namespace {

struct Bad {
  std::string what;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (...) {
    throw Bad{"'" + s + "' is not a number"};
  }
  if (used != s.size()) throw Bad{"'" + s + "' is not a number"};
  return v;
}

long long to_int(const std::string& s) {
  std::size_t used = 0;
  long long v;
  try {
    v = std::stoll(s, &used);
  } catch (...) {
    throw Bad{"'" + s + "' is not an integer"};
  }
  if (used != s.size()) throw Bad{"'" + s + "' is not an integer"};
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Bad{"'" + s + "' is not a boolean"};
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split_list(s)) out.push_back(to_double(x));
  return out;
}

template <class T>
std::vector<T> broadcast(std::vector<T> v, int d, const char* key) {
  if (v.size() == 1) return std::vector<T>(static_cast<std::size_t>(std::max(d, 1)), v[0]);
  if (static_cast<int>(v.size()) != d) throw Bad{std::string(key) + " needs 1 or d values"};
  return v;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::vector<int> to_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& x : split_list(s)) out.push_back(static_cast<int>(to_int(x)));
  return out;
}

#define HVP_DOUBLE(key, field) \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = to_double(v); }, [](const RunConfig& c) { return format_double(c.field); }}
#define HVP_INT(key, field) \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = static_cast<decltype(c.field)>(to_int(v)); }, [](const RunConfig& c) { return std::to_string(c.field); }}
#define HVP_AXES(key, field, conv)                                                                            \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = v.empty() ? decltype(c.field){} : broadcast(conv(v), c.grid.d, key); }, \
      [](const RunConfig& c) { return join(c.field); }}
#define HVP_LIST(key, field) \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = to_doubles(v); }, [](const RunConfig& c) { return join(c.field); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      HVP_INT("grid.d", grid.d),
      HVP_AXES("grid.nx", grid.nx, to_ints),
      HVP_AXES("grid.nv", grid.nv, to_ints),
      HVP_AXES("grid.x_lo", grid.x_lo, to_doubles),
      HVP_AXES("grid.x_hi", grid.x_hi, to_doubles),
      HVP_AXES("grid.v_lo", grid.v_lo, to_doubles),
      HVP_AXES("grid.v_hi", grid.v_hi, to_doubles),
      HVP_INT("grid.max_points", grid.max_points),
      Key{"kernel.kind", [](RunConfig& c, const std::string& v) {
            try { c.kernel_kind = parse_kernel_kind(v); } catch (const Error&) { throw Bad{"'" + v + "' is not one of newtonian, mollified, zero"}; }
          },
          [](const RunConfig& c) { return to_string(c.kernel_kind); }},
      HVP_DOUBLE("kernel.coupling", coupling),
      HVP_DOUBLE("kernel.epsilon", epsilon),
      Key{"conv.method", [](RunConfig& c, const std::string& v) {
            try { c.conv = parse_conv_method(v); } catch (const Error&) { throw Bad{"'" + v + "' is not one of direct, fft"}; }
          },
          [](const RunConfig& c) { return to_string(c.conv); }},
      Key{"profile.kind", [](RunConfig& c, const std::string& v) {
            try { c.profile.kind = parse_profile_kind(v); } catch (const Error&) { throw Bad{"'" + v + "' is not one of zero, gaussian, ball"}; }
          },
          [](const RunConfig& c) { return to_string(c.profile.kind); }},
      HVP_DOUBLE("profile.amplitude", profile.amplitude),
      Key{"profile.normalize", [](RunConfig& c, const std::string& v) { c.profile.normalize = to_bool(v); },
          [](const RunConfig& c) { return std::string(c.profile.normalize ? "true" : "false"); }},
      HVP_DOUBLE("profile.mass", profile.mass),
      HVP_AXES("profile.x0", profile.x0, to_doubles),
      HVP_AXES("profile.v0", profile.v0, to_doubles),
      HVP_AXES("profile.k", profile.k, to_doubles),
      HVP_AXES("profile.q", profile.q, to_doubles),
      HVP_DOUBLE("profile.sigma_x", profile.sigma_x),
      HVP_DOUBLE("profile.sigma_v", profile.sigma_v),
      HVP_DOUBLE("profile.chirp", profile.chirp),
      HVP_DOUBLE("profile.radius", profile.radius),
      HVP_DOUBLE("profile.width", profile.width),
      HVP_DOUBLE("profile.noise", profile.noise),
      HVP_DOUBLE("solver.dt", solver.dt),
      HVP_DOUBLE("solver.t_end", solver.t_end),
      HVP_INT("solver.substeps", solver.substeps),
      Key{"solver.mode", [](RunConfig& c, const std::string& v) {
            try { c.solver.mode = parse_step_mode(v); } catch (const Error&) { throw Bad{"'" + v + "' is not one of frozen, pc1"}; }
          },
          [](const RunConfig& c) { return to_string(c.solver.mode); }},
      HVP_INT("solver.picard_n_max", solver.picard_n_max),
      HVP_DOUBLE("solver.picard_tol", solver.picard_tol),
      HVP_DOUBLE("solver.kappa", solver.kappa),
      HVP_DOUBLE("solver.radius_max", radius_max),
      HVP_INT("solver.norm_budget_mb", norm_budget_mb),
      HVP_DOUBLE("solver.norm_guard", solver.norm_guard),
      HVP_DOUBLE("solver.l2_tolerance", solver.l2_tolerance),
      HVP_INT("solver.keep_every", solver.keep_every),
      HVP_LIST("diagnostics.rho_p", diagnostics.rho_p),
      HVP_LIST("diagnostics.moment_k", diagnostics.moment_k),
      HVP_DOUBLE("diagnostics.gauge_c", diagnostics.gauge_c),
      Key{"output.dir", [](RunConfig& c, const std::string& v) { c.output.dir = v; },
          [](const RunConfig& c) { return c.output.dir; }},
      Key{"output.csv", [](RunConfig& c, const std::string& v) { c.output.csv = v; },
          [](const RunConfig& c) { return c.output.csv; }},
      HVP_INT("output.dump_every", output.dump_every),
      HVP_INT("seed", seed),
  };
  return k;
}

#undef HVP_DOUBLE
#undef HVP_INT
#undef HVP_AXES
#undef HVP_LIST

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void validate(const RunConfig& c, std::vector<std::string>& errs) {
  const auto& g = c.grid;
  if (g.d < 1) errs.push_back("grid.d: must be at least 1");
  const auto d = static_cast<std::size_t>(std::max(g.d, 0));
  auto sized = [&](const char* key, std::size_t n) {
    if (n != d) errs.push_back(std::string(key) + ": needs " + std::to_string(d) + " values, has " + std::to_string(n));
    return n == d;
  };
  const bool ok = sized("grid.nx", g.nx.size()) & sized("grid.nv", g.nv.size()) & sized("grid.x_lo", g.x_lo.size()) &
                  sized("grid.x_hi", g.x_hi.size()) & sized("grid.v_lo", g.v_lo.size()) & sized("grid.v_hi", g.v_hi.size());
  if (ok) {
    long double total = 1.0L;
    for (std::size_t a = 0; a < d; ++a) {
      auto ordered = [&](const char* lo, const char* hi, double l, double h) {
        if (!(l < h))
          errs.push_back(std::string(lo) + "[" + std::to_string(a) + "] = " + format_double(l) + " must be below " + hi +
                         "[" + std::to_string(a) + "] = " + format_double(h));
      };
      ordered("grid.x_lo", "grid.x_hi", g.x_lo[a], g.x_hi[a]);
      ordered("grid.v_lo", "grid.v_hi", g.v_lo[a], g.v_hi[a]);
      if (g.nx[a] < 4) errs.push_back("grid.nx: counts must be at least 4");
      if (g.nv[a] < 4) errs.push_back("grid.nv: counts must be at least 4");
      total *= static_cast<long double>(std::max(g.nx[a], 1)) * std::max(g.nv[a], 1);
    }
    if (total > static_cast<long double>(g.max_points))
      errs.push_back("grid.max_points: grid has " + format_double(static_cast<double>(total)) + " nodes, cap is " +
                     std::to_string(g.max_points));
  }
  if (c.kernel_kind != KernelKind::Zero && g.d < 3) errs.push_back("kernel.kind: newtonian kernels need grid.d >= 3");
  if (c.kernel_kind == KernelKind::Mollified && !(c.epsilon > 0.0)) errs.push_back("kernel.epsilon: must be positive for the mollified kernel");
  if (!std::isfinite(c.coupling)) errs.push_back("kernel.coupling: must be finite");
  const auto& p = c.profile;
  for (auto [key, list] : {std::pair{"profile.x0", &p.x0}, {"profile.v0", &p.v0}, {"profile.k", &p.k}, {"profile.q", &p.q}})
    if (!list->empty() && list->size() != d) errs.push_back(std::string(key) + ": needs " + std::to_string(d) + " values");
  if (!(p.sigma_x > 0.0)) errs.push_back("profile.sigma_x: must be positive");
  if (!(p.sigma_v > 0.0)) errs.push_back("profile.sigma_v: must be positive");
  if (!(p.width > 0.0)) errs.push_back("profile.width: must be positive");
  if (!(p.mass > 0.0)) errs.push_back("profile.mass: must be positive");
  const auto& s = c.solver;
  if (!(s.dt > 0.0)) errs.push_back("solver.dt: must be positive");
  else if (!(s.t_end >= s.dt * (1.0 - 1e-12))) errs.push_back("solver.t_end: must be at least solver.dt");
  else if (std::abs(s.steps() * s.dt - s.t_end) > 1e-9 * s.t_end) errs.push_back("solver.t_end: must be a multiple of solver.dt");
  if (s.substeps < 1) errs.push_back("solver.substeps: must be at least 1");
  if (s.picard_n_max < 1) errs.push_back("solver.picard_n_max: must be at least 1");
  if (!(s.kappa >= 2.0 * g.d)) errs.push_back("solver.kappa: must be at least the phase-space dimension 2d");
  if (!(s.norm_guard > 1.0)) errs.push_back("solver.norm_guard: must exceed 1");
  if (s.keep_every < 0) errs.push_back("solver.keep_every: must be nonnegative");
  if (c.output.dump_every < 0) errs.push_back("output.dump_every: must be nonnegative");
  for (double q : c.diagnostics.rho_p)
    if (!(q >= 1.0)) errs.push_back("diagnostics.rho_p: exponents must be at least 1");
  for (double k : c.diagnostics.moment_k)
    if (!(k >= 0.0)) errs.push_back("diagnostics.moment_k: orders must be nonnegative");
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.push_back(k.name);
  return out;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t bd = ~std::size_t{0};
  for (const auto& k : keys()) {
    const std::size_t dist = edit_distance(key, k.name);
    if (dist < bd) {
      bd = dist;
      best = k.name;
    }
  }
  return best;
}

RunConfig parse_config_text(const std::string& text) {
  struct Entry {
    std::string value;
    int line;
    int column;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    const std::string t = trim(body);
    if (t.empty()) continue;
    const int col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw Error(ErrorKind::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty())
      throw Error(ErrorKind::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": missing key");
    const std::string full = section.empty() || key.find('.') != std::string::npos ? key : section + "." + key;
    const int vcol = static_cast<int>(eq) + 2;
    entries.push_back({full, {trim(body.substr(eq + 1)), line, vcol}});
  }

  std::vector<std::string> errs;
  for (const auto& [k, e] : entries) {
    const auto& all = keys();
    if (std::none_of(all.begin(), all.end(), [&](const Key& x) { return x.name == k; }))
      errs.push_back("line " + std::to_string(e.line) + ": unknown key '" + k + "' (did you mean '" + nearest_key(k) + "'?)");
  }
  RunConfig c;
  for (const Key& key : keys()) {
    for (const auto& [k, e] : entries) {
      if (k != key.name) continue;
      try {
        key.set(c, e.value);
      } catch (const Bad& b) {
        errs.push_back("line " + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + k + ": " + b.what);
      }
    }
    // Per-axis defaults follow grid.d when it changes.
    if (key.name == "grid.d" && c.grid.d >= 1) {
      auto& g = c.grid;
      const auto d = static_cast<std::size_t>(g.d);
      auto fit = [&](auto& v) { v.resize(d, v.empty() ? typename std::decay_t<decltype(v)>::value_type{} : v.back()); };
      fit(g.nx), fit(g.nv), fit(g.x_lo), fit(g.x_hi), fit(g.v_lo), fit(g.v_hi);
    }
  }
  c.profile.seed = c.seed;
  validate(c, errs);
  if (!errs.empty()) {
    std::string msg = std::to_string(errs.size()) + " problem(s) in config";
    for (const auto& e : errs) msg += "\n  " + e;
    throw Error(ErrorKind::ValidationError, msg);
  }
  return c;
}

RunConfig parse_config(const std::string& path) { return parse_config_text(read_file(path)); }

std::string dump_config(const RunConfig& c) {
  std::string out, section;
  // Bare keys first: after a header they would land in that section.
  std::vector<const Key*> order;
  for (const Key& k : keys())
    if (k.name.find('.') == std::string::npos) order.push_back(&k);
  for (const Key& k : keys())
    if (k.name.find('.') != std::string::npos) order.push_back(&k);
  for (const Key* kp : order) {
    const Key& k = *kp;
    const auto dot = k.name.find('.');
    const std::string sec = dot == std::string::npos ? "" : k.name.substr(0, dot);
    const std::string name = dot == std::string::npos ? k.name : k.name.substr(dot + 1);
    if (sec != section) {
      out += (out.empty() ? "" : "\n") + std::string("[") + sec + "]\n";
      section = sec;
    }
    out += (sec.empty() ? k.name : name) + " = " + k.get(c) + "\n";
  }
  return out;
}

std::vector<double> RunConfig::radius_set(const Lattice& phase) const {
  return fit_radius_set(phase, default_radius_set(phase, radius_max), norm_budget_mb * 1024ull * 1024ull);
}

Setup make_setup(const RunConfig& c) {
  Setup s;
  s.grid = make_grid(c.grid);
  s.kernel = c.kernel();
  s.solver = c.solver;
  s.solver.radius_set = c.radius_set(s.grid.phase);
  return s;
}

}  // namespace hvp
