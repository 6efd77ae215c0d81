#include "wkg/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "wkg/common.hpp"

namespace wkg {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(unsigned(s[a]))) ++a;
  while (b > a && std::isspace(unsigned(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(unsigned(c)));
  return s;
}

long long parse_int(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  require(!s.empty() && errno == 0 && end == s.c_str() + s.size(),
          what + ": '" + s + "' is not an integer");
  return v;
}

double parse_real(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && errno == 0 && end == s.c_str() + s.size(),
          what + ": '" + s + "' is not a number");
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  const std::string v = lower(trim(s));
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  fail(what + ": '" + s + "' is not a boolean");
}

void parse_vec2(const std::string& s, double out[2], const std::string& what) {
  std::istringstream in(s);
  std::string junk;
  require(bool(in >> out[0] >> out[1]) && !(in >> junk),
          what + ": '" + s + "' is not a pair of numbers");
}

struct Entry {
  std::string section, key, type, doc;
  std::function<void(RunConfig&, int, const std::string&, const std::string&)>
      set;  // (config, bump index, raw value, diagnostic name)
};

Bump& bump_at(RunConfig& c, int idx, const std::string& what) {
  require(idx >= 0 && idx <= int(c.init.bumps.size()),
          what + ": bump indices must be used in order without gaps");
  if (idx == int(c.init.bumps.size())) c.init.bumps.push_back({});
  return c.init.bumps[std::size_t(idx)];
}

std::vector<Entry> build_schema() {
  std::vector<Entry> v;
  const auto add = [&](std::string sec, std::string key, std::string type,
                       std::string doc, auto fn) {
    v.push_back({std::move(sec), std::move(key), std::move(type),
                 std::move(doc), std::move(fn)});
  };
  add("grid", "n", "int", "grid points per side, even and >= 8",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.n = int(parse_int(s, w));
      });
  add("grid", "box", "real", "half width of the periodic box",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.box = parse_real(s, w);
      });

  add("time", "dt_factor", "real", "time step as a fraction of the spacing",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.dt_factor = parse_real(s, w);
      });
  add("time", "t_final", "real", "end time of the run",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.t_final = parse_real(s, w);
      });
  add("time", "record_every", "real", "diagnostics cadence (integer steps)",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.record_every = parse_real(s, w);
      });
  add("time", "checkpoint_every", "real",
      "checkpoint cadence, multiple of record_every; 0 disables",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.checkpoint_every = parse_real(s, w);
      });

  add("couplings", "c1", "real", "Q0 coefficient in the wave equation",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.couplings.c1 = parse_real(s, w);
      });
  add("couplings", "c2", "real", "Q0 coefficient in the Klein-Gordon equation",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.couplings.c2 = parse_real(s, w);
      });
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const std::string suffix = std::to_string(a) + std::to_string(b);
      add("couplings", "c1_" + suffix, "real",
          "Q_{" + suffix + "} coefficient in the wave equation",
          [a, b](RunConfig& c, int, const std::string& s,
                 const std::string& w) { c.couplings.c1ab[a][b] = parse_real(s, w); });
      add("couplings", "c2_" + suffix, "real",
          "Q_{" + suffix + "} coefficient in the Klein-Gordon equation",
          [a, b](RunConfig& c, int, const std::string& s,
                 const std::string& w) { c.couplings.c2ab[a][b] = parse_real(s, w); });
    }
  add("couplings", "break_null", "bool",
      "replace Q0 by dt(w) dt(v) for comparison runs",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.couplings.break_null_structure = parse_bool(s, w);
      });

  add("init", "seed", "int", "seed for the optional random bumps",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.init.seed = std::uint64_t(parse_int(s, w));
      });
  add("init", "random_bumps", "int",
      "number of extra seeded bumps appended to the list",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        const long long x = parse_int(s, w);
        require(x >= 0, w + ": must be >= 0");
        c.init.random_bumps = int(x);
      });

  add("bump.<k>", "target", "enum", "w | v",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        const std::string v = lower(trim(s));
        if (v == "w")
          bump_at(c, i, w).target = Target::w;
        else if (v == "v")
          bump_at(c, i, w).target = Target::v;
        else
          fail(w + ": '" + s + "' is not one of w, v");
      });
  add("bump.<k>", "kind", "enum", "gaussian | modulated_gaussian",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        const std::string v = lower(trim(s));
        if (v == "gaussian")
          bump_at(c, i, w).kind = Bump::Kind::gaussian;
        else if (v == "modulated_gaussian")
          bump_at(c, i, w).kind = Bump::Kind::modulated_gaussian;
        else
          fail(w + ": '" + s + "' is not one of gaussian, modulated_gaussian");
      });
  add("bump.<k>", "velocity", "bool",
      "false: add to the field value; true: to its time derivative",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        bump_at(c, i, w).velocity = parse_bool(s, w);
      });
  add("bump.<k>", "amplitude", "real", "peak value",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        bump_at(c, i, w).amplitude = parse_real(s, w);
      });
  add("bump.<k>", "center", "vec2", "two coordinates",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        parse_vec2(s, bump_at(c, i, w).center, w);
      });
  add("bump.<k>", "width", "real", "gaussian width",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        bump_at(c, i, w).width = parse_real(s, w);
      });
  add("bump.<k>", "mod_k", "vec2", "modulation wave vector",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        parse_vec2(s, bump_at(c, i, w).mod_k, w);
      });
  add("bump.<k>", "phase", "real", "modulation phase",
      [](RunConfig& c, int i, const std::string& s, const std::string& w) {
        bump_at(c, i, w).phase = parse_real(s, w);
      });

  add("diagnostics", "word_cap", "int", "word length cap, 0..3",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.word_cap = int(parse_int(s, w));
      });
  add("diagnostics", "delta", "real", "bootstrap scaling exponent",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.delta = parse_real(s, w);
      });
  add("diagnostics", "delta0", "real", "ghost accumulator time exponent",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.delta0 = parse_real(s, w);
      });
  add("diagnostics", "track_words", "bool", "per-word energy and ghost blocks",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.track_words = parse_bool(s, w);
      });
  add("diagnostics", "track_sobolev", "bool", "pointwise-decay ratio columns",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.track_sobolev = parse_bool(s, w);
      });
  add("diagnostics", "track_decomposition", "bool",
      "divergence decomposition residual columns",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.track_decomposition = parse_bool(s, w);
      });
  add("diagnostics", "track_reconstruction", "bool",
      "reconstruction error columns (needs evolve_companions)",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.diag.track_reconstruction = parse_bool(s, w);
      });
  add("diagnostics", "evolve_companions", "bool",
      "co-evolve the decomposition companion pairs",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.evolve_companions = parse_bool(s, w);
      });

  add("output", "dir", "string", "output directory",
      [](RunConfig& c, int, const std::string& s, const std::string&) {
        c.output_dir = trim(s);
      });
  add("output", "name", "string", "base name for output files",
      [](RunConfig& c, int, const std::string& s, const std::string&) {
        c.run_name = trim(s);
      });
  add("output", "svg", "bool", "write the SVG plots",
      [](RunConfig& c, int, const std::string& s, const std::string& w) {
        c.write_svg = parse_bool(s, w);
      });
  return v;
}

const std::vector<Entry>& schema() {
  static const std::vector<Entry> v = build_schema();
  return v;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = int(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest_key(const std::string& dotted) {
  int best = 1 << 20;
  std::string who;
  for (const Entry& e : schema()) {
    const std::string full = e.section + "." + e.key;
    const int d = edit_distance(dotted, full);
    if (d < best) {
      best = d;
      who = full;
    }
  }
  if (!who.empty() && best <= std::max<int>(2, int(dotted.size()) / 3))
    return "; did you mean '" + who + "'?";
  return "";
}

/// Splits a section name into its schema form and a bump index (-1: none).
std::string normalize_section(const std::string& section, int& bump_index,
                              const std::string& what) {
  bump_index = -1;
  if (section.rfind("bump.", 0) == 0) {
    bump_index = int(parse_int(section.substr(5), what + ": bump index"));
    return "bump.<k>";
  }
  require(section != "bump", what + ": bump sections need an index: [bump.0]");
  return section;
}

void set_value(RunConfig& cfg, const std::string& section,
               const std::string& key, const std::string& value,
               const std::string& what) {
  int bump_index = -1;
  const std::string norm = normalize_section(section, bump_index, what);
  for (const Entry& e : schema())
    if (e.section == norm && e.key == key) {
      e.set(cfg, bump_index, value, what + " (" + section + "." + key + ")");
      return;
    }
  const std::string dotted = norm + "." + key;
  fail(what + ": unknown config key '" + section + "." + key + "'" +
       nearest_key(dotted));
}

bool known_section(const std::string& norm) {
  for (const Entry& e : schema())
    if (e.section == norm) return true;
  return false;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const Entry& e : schema()) out.push_back({e.section, e.key, e.type, e.doc});
    return out;
  }();
  return keys;
}

std::string schema_text() {
  std::string out;
  std::string last_section;
  for (const Entry& e : schema()) {
    if (e.section != last_section) {
      if (!last_section.empty()) out += "\n";
      out += "[" + e.section + "]\n";
      last_section = e.section;
    }
    std::string line = "  " + e.key + "  ";
    if (line.size() < 24) line.resize(24, ' ');
    line += e.type + "  ";
    if (line.size() < 32) line.resize(32, ' ');
    out += line + e.doc + "\n";
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"default-eps", "theorem-decay"};
}

namespace {

void standard_couplings(CouplingTensors& c) {
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.c1ab[0][1] = 1.0;
  c.c1ab[1][2] = 0.5;
  c.c2ab[0][2] = 1.0;
  c.c2ab[1][2] = 0.5;
}

Bump make_bump(Target target, bool velocity, double amp, double cx, double cy,
               double width) {
  Bump b;
  b.target = target;
  b.velocity = velocity;
  b.amplitude = amp;
  b.center[0] = cx;
  b.center[1] = cy;
  b.width = width;
  return b;
}

}  // namespace

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "default-eps") {
    standard_couplings(c.couplings);
    // no bump on the Klein-Gordon value slot: the companion carrier data is
    // then exact and the resummed reconstruction tracks w to roundoff
    c.init.bumps = {
        make_bump(Target::w, false, 1e-2, 0.0, 0.0, 2.0),
        make_bump(Target::w, true, 5e-3, 1.0, -0.5, 2.0),
        make_bump(Target::v, true, 1e-2, -0.8, 0.6, 1.8),
    };
    c.diag.track_reconstruction = true;
    c.evolve_companions = true;
    c.run_name = "default-eps";
  } else if (name == "theorem-decay") {
    c.n = 512;
    c.box = 128.0;
    c.t_final = 80.0;
    c.record_every = 1.0;
    standard_couplings(c.couplings);
    // wider profiles: at h = 0.5 the dealias cutoff sits near |k| = 4.2, so
    // narrow bumps would leave visible spectral tails in the product terms
    c.init.bumps = {
        make_bump(Target::w, false, 1e-3, 0.0, 0.0, 3.0),
        make_bump(Target::w, true, 5e-4, 1.0, -0.5, 3.0),
        make_bump(Target::v, true, 1e-3, -0.8, 0.6, 2.5),
    };
    c.run_name = "theorem-decay";
  } else {
    std::string names;
    for (const std::string& p : preset_names()) names += " " + p;
    fail("unknown preset '" + name + "' (available:" + names + ")");
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool cleared_bumps = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      int idx = -1;
      const std::string norm = normalize_section(section, idx, where);
      require(known_section(norm), where + ": unknown section '" + section +
                                       "'");
      if (idx >= 0 && !cleared_bumps) {
        base.init.bumps.clear();
        cleared_bumps = true;
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    require(eq != std::string::npos, where + ": expected key = value");
    require(!section.empty(), where + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    set_value(base, section, key, value, where);
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

void apply_override(RunConfig& cfg, const std::string& dotted,
                    const std::string& value) {
  const std::string what = "override '" + dotted + "'";
  const std::size_t first = dotted.find('.');
  require(first != std::string::npos, what + ": expected section.key");
  std::string section = dotted.substr(0, first);
  std::string key = dotted.substr(first + 1);
  if (section == "bump") {
    const std::size_t second = key.find('.');
    require(second != std::string::npos,
            what + ": expected bump.<index>.key");
    section += "." + key.substr(0, second);
    key = key.substr(second + 1);
  }
  set_value(cfg, section, key, value, what);
}

void validate(const RunConfig& cfg) {
  require(cfg.n >= 8 && cfg.n % 2 == 0, "grid.n must be even and >= 8");
  require(cfg.box > 0.0, "grid.box must be positive");
  require(cfg.dt_factor > 0.0, "time.dt_factor must be positive");
  require(cfg.t_final > 0.0, "time.t_final must be positive");
  require(cfg.record_every > 0.0, "time.record_every must be positive");

  const double spr = cfg.record_every / cfg.dt();
  require(std::abs(spr - std::round(spr)) <= 1e-9 * std::max(1.0, spr) &&
              std::round(spr) >= 1.0,
          "time.record_every must be a whole number of steps");
  const double nrec = cfg.t_final / cfg.record_every;
  require(std::abs(nrec - std::round(nrec)) <= 1e-9 * std::max(1.0, nrec) &&
              std::round(nrec) >= 1.0,
          "time.t_final must be a whole number of record intervals");
  if (cfg.checkpoint_every != 0.0) {
    require(cfg.checkpoint_every > 0.0,
            "time.checkpoint_every must be >= 0");
    const double q = cfg.checkpoint_every / cfg.record_every;
    require(std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q) &&
                std::round(q) >= 1.0,
            "time.checkpoint_every must be a multiple of record_every");
  }
  require(cfg.diag.word_cap >= 0 && cfg.diag.word_cap <= 3,
          "diagnostics.word_cap must be in [0, 3]");
  require(cfg.diag.delta > 0.0 && cfg.diag.delta0 > 0.0,
          "diagnostics exponents must be positive");
  if (cfg.diag.track_reconstruction)
    require(cfg.evolve_companions,
            "diagnostics.track_reconstruction needs evolve_companions");
  for (const Bump& b : cfg.init.bumps)
    require(b.width > 0.0, "bump widths must be positive");
  require(cfg.init.random_bumps >= 0, "init.random_bumps must be >= 0");
  require(!cfg.run_name.empty(), "output.name must not be empty");
}

}  // namespace wkg
