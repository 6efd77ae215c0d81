#include "wkg/fields.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "wkg/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace wkg {

namespace {

constexpr double support_floor = 1e-12;

double bump_radius(const Bump& b) {
  const double a = std::abs(b.amplitude);
  if (a <= support_floor) return 0.0;
  const double d = b.width * std::sqrt(std::log(a / support_floor));
  return std::hypot(b.center[0], b.center[1]) + d;
}

void add_bump(FieldState& s, const Bump& b) {
  Field& dst = b.target == Target::w ? (b.velocity ? s.wt : s.w)
                                     : (b.velocity ? s.vt : s.v);
  const Grid& g = dst.grid();
  for (int i = 0; i < g.n(); ++i) {
    const double dx1 = g.node(i) - b.center[0];
    for (int j = 0; j < g.n(); ++j) {
      const double dx2 = g.node(j) - b.center[1];
      double val = b.amplitude * std::exp(-(dx1 * dx1 + dx2 * dx2) /
                                          (b.width * b.width));
      if (b.kind == Bump::Kind::modulated_gaussian)
        val *= std::cos(b.mod_k[0] * dx1 + b.mod_k[1] * dx2 + b.phase);
      dst.at(i, j) += val;
    }
  }
}

std::vector<Bump> expand_bumps(const InitialDataSpec& spec) {
  std::vector<Bump> out = spec.bumps;
  if (spec.random_bumps > 0) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < spec.random_bumps; ++k) {
      Bump b;
      b.target = k % 2 == 0 ? Target::w : Target::v;
      b.velocity = b.target == Target::v;
      b.amplitude = 1e-3 * (0.5 + 0.5 * std::abs(unit(rng)));
      b.center[0] = 2.0 * unit(rng);
      b.center[1] = 2.0 * unit(rng);
      b.width = 0.75 + 0.5 * std::abs(unit(rng));
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace

double data_radius(const InitialDataSpec& spec) {
  double r = 0.0;
  for (const Bump& b : expand_bumps(spec)) r = std::max(r, bump_radius(b));
  return r;
}

FieldState build_initial_state(const GridPtr& grid, const InitialDataSpec& spec,
                               const CouplingTensors& couplings) {
  for (const Bump& b : spec.bumps) {
    require(b.width > 0.0, "bump width must be positive");
    require(std::isfinite(b.amplitude), "bump amplitude must be finite");
  }
  const double r0 = data_radius(spec);
  require(r0 < grid->L() / 2.0,
          "initial data support radius " + std::to_string(r0) +
              " reaches L/2; enlarge the box");

  FieldState s;
  s.t = 0.0;
  s.w = Field(grid);
  s.wt = Field(grid);
  s.v = Field(grid);
  s.vt = Field(grid);
  s.couplings = couplings;
  for (const Bump& b : expand_bumps(spec)) add_bump(s, b);
  return s;
}

void check_state_sane(const FieldState& s) {
  for (const Field* f : {&s.w, &s.wt, &s.v, &s.vt}) {
    for (std::size_t k = 0; k < f->size(); ++k) {
      const double x = (*f)[k];
      if (!std::isfinite(x) || std::abs(x) > 1e6)
        fail_internal("blow-up detector tripped at t = " + std::to_string(s.t));
    }
  }
}

namespace {

double weighted_l1(const Field& f, const Field& wgt) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += std::abs(f[k]) * wgt[k];
  return acc * sqr(f.grid().h());
}

double weighted_l2(const Field& f, const Field& wgt) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += sqr(f[k] * wgt[k]);
  return std::sqrt(acc * sqr(f.grid().h()));
}

}  // namespace

SmallnessReport smallness_norms(const FieldState& s, int order_cap) {
  require(order_cap >= 0 && order_cap <= 4, "smallness order_cap must be in [0, 4]");
  const GridPtr& gp = s.grid_ptr();
  const Grid& g = *gp;

  Field r(gp);  // |x| per node
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      r.at(i, j) = std::hypot(g.node(i), g.node(j));

  auto bracket_pow = [&](int p) {
    Field out(gp);
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = std::pow(jbracket(r[k]), p);
    return out;
  };
  auto bracket_pow_log = [&](int p) {
    Field out(gp);
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = std::pow(jbracket(r[k]), p) * std::log(2.0 + r[k]);
    return out;
  };

  const Spectrum sw0 = to_spectrum(s.w), sw1 = to_spectrum(s.wt);
  const Spectrum sv0 = to_spectrum(s.v), sv1 = to_spectrum(s.vt);

  SmallnessReport rep;
  for (int k = 0; k <= order_cap; ++k) {
    const Field pw_k = bracket_pow(k), pw_k1 = bracket_pow(k + 1);
    const Field lg_k1 = bracket_pow_log(k + 1), lg_k2 = bracket_pow_log(k + 2);
    for (int b = 0; b <= k; ++b) {
      const int c = k - b;
      const Field dw0 = spectral_mixed_derivative(sw0, b, c);
      const Field dw1 = spectral_mixed_derivative(sw1, b, c);
      const Field dv0 = spectral_mixed_derivative(sv0, b, c);
      const Field dv1 = spectral_mixed_derivative(sv1, b, c);
      rep.data_sum += std::min(weighted_l1(dw0, pw_k), weighted_l2(dw0, pw_k));
      rep.data_sum += weighted_l2(dv0, lg_k1);
      rep.velocity_sum +=
          std::min(weighted_l1(dw1, pw_k1), weighted_l2(dw1, pw_k1));
      rep.velocity_sum += weighted_l2(dv1, lg_k2);
    }
  }
  rep.total = rep.data_sum + rep.velocity_sum;
  return rep;
}

// ---------------------------------------------------------------------------
// checkpoint container

namespace {

constexpr char ckpt_magic[8] = {'W', 'K', 'G', '2', 'D', 'C', 'K', 'P'};
constexpr std::uint32_t ckpt_version = 1;

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_doubles(std::ofstream& os, const double* p, std::size_t count) {
  os.write(reinterpret_cast<const char*>(p),
           std::streamsize(count * sizeof(double)));
}

void get_doubles(std::ifstream& is, double* p, std::size_t count) {
  is.read(reinterpret_cast<char*>(p), std::streamsize(count * sizeof(double)));
}

}  // namespace

const std::vector<double>* CheckpointExtras::find(const std::string& tag) const {
  for (const auto& [name, payload] : sections)
    if (name == tag) return &payload;
  return nullptr;
}

void save_checkpoint(const std::string& path, const FieldState& s,
                     const CheckpointExtras& extras) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(bool(os), "cannot open checkpoint for writing: " + path);

  os.write(ckpt_magic, sizeof(ckpt_magic));
  put(os, ckpt_version);
  put(os, std::uint32_t(s.grid().n()));
  put(os, s.grid().L());
  put(os, s.t);
  put(os, s.couplings.c1);
  put(os, s.couplings.c2);
  put_doubles(os, &s.couplings.c1ab[0][0], 9);
  put_doubles(os, &s.couplings.c2ab[0][0], 9);
  put(os, std::uint8_t(s.couplings.break_null_structure ? 1 : 0));

  for (const Field* f : {&s.w, &s.wt, &s.v, &s.vt})
    put_doubles(os, f->data(), f->size());

  put(os, std::uint32_t(extras.sections.size()));
  for (const auto& [tag, payload] : extras.sections) {
    put(os, std::uint32_t(tag.size()));
    os.write(tag.data(), std::streamsize(tag.size()));
    put(os, std::uint64_t(payload.size()));
    put_doubles(os, payload.data(), payload.size());
  }
  require(bool(os), "checkpoint write failed: " + path);
}

std::pair<FieldState, CheckpointExtras> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), "cannot open checkpoint: " + path);

  char magic[8];
  is.read(magic, sizeof(magic));
  require(is && std::memcmp(magic, ckpt_magic, sizeof(magic)) == 0,
          "not a checkpoint file: " + path);
  const auto version = get<std::uint32_t>(is);
  require(version == ckpt_version,
          "unsupported checkpoint version " + std::to_string(version));

  const int n = int(get<std::uint32_t>(is));
  const double L = get<double>(is);
  GridPtr grid = Grid::make(n, L);

  FieldState s;
  s.t = get<double>(is);
  s.couplings.c1 = get<double>(is);
  s.couplings.c2 = get<double>(is);
  get_doubles(is, &s.couplings.c1ab[0][0], 9);
  get_doubles(is, &s.couplings.c2ab[0][0], 9);
  s.couplings.break_null_structure = get<std::uint8_t>(is) != 0;

  s.w = Field(grid);
  s.wt = Field(grid);
  s.v = Field(grid);
  s.vt = Field(grid);
  for (Field* f : {&s.w, &s.wt, &s.v, &s.vt})
    get_doubles(is, f->data(), f->size());

  CheckpointExtras extras;
  const auto nsec = get<std::uint32_t>(is);
  for (std::uint32_t k = 0; k < nsec; ++k) {
    const auto taglen = get<std::uint32_t>(is);
    std::string tag(taglen, '\0');
    is.read(tag.data(), taglen);
    const auto count = get<std::uint64_t>(is);
    std::vector<double> payload(count);
    get_doubles(is, payload.data(), count);
    extras.sections.emplace_back(std::move(tag), std::move(payload));
  }
  require(bool(is), "truncated checkpoint: " + path);
  return {std::move(s), std::move(extras)};
}

}  // namespace wkg
