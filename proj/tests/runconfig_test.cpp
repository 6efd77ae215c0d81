#include <doctest.h>

#include <functional>
#include <string>

#include "wkg/runconfig.hpp"

using namespace wkg;

namespace {

std::string thrown_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults pass validation") {
  CHECK_NOTHROW(validate(RunConfig{}));
}

TEST_CASE("presets are valid and distinct") {
  for (const std::string& name : preset_names()) {
    const RunConfig cfg = preset(name);
    CHECK_NOTHROW(validate(cfg));
    CHECK(cfg.run_name == name);
    CHECK(!cfg.init.bumps.empty());
  }
  CHECK(preset("theorem-decay").n != preset("default-eps").n);
  const std::string msg =
      thrown_message([] { (void)preset("theorem-freefall"); });
  CHECK(msg.find("theorem-decay") != std::string::npos);
}

TEST_CASE("config text sets sectioned keys and clears preset bumps") {
  const std::string text = R"(
# comment line
[grid]
n = 128
box = 24.0

[time]
t_final = 6.5   # trailing comment
record_every = 0.5

[couplings]
c1 = 0.25
c1_01 = -1.5
break_null = true

[bump.0]
target = v
amplitude = 0.125
width = 2.25
center = 0.5 -1.75
velocity = true
)";
  const RunConfig cfg = parse_config_text(text, preset("default-eps"));
  CHECK(cfg.n == 128);
  CHECK(cfg.box == 24.0);
  CHECK(cfg.t_final == 6.5);
  CHECK(cfg.couplings.c1 == 0.25);
  CHECK(cfg.couplings.c1ab[0][1] == -1.5);
  CHECK(cfg.couplings.break_null_structure);
  REQUIRE(cfg.init.bumps.size() == 1);  // preset bumps cleared
  CHECK(cfg.init.bumps[0].target == Target::v);
  CHECK(cfg.init.bumps[0].velocity);
  CHECK(cfg.init.bumps[0].amplitude == 0.125);
  CHECK(cfg.init.bumps[0].center[1] == -1.75);
}

TEST_CASE("typos earn a nearest-key suggestion") {
  RunConfig cfg;
  const std::string msg = thrown_message(
      [&] { apply_override(cfg, "gird.n", "128"); });
  CHECK(msg.find("grid.n") != std::string::npos);
  const std::string msg2 = thrown_message(
      [&] { apply_override(cfg, "time.t_fnal", "10"); });
  CHECK(msg2.find("t_final") != std::string::npos);
}

TEST_CASE("overrides reach nested bump fields and append in order") {
  RunConfig cfg = preset("default-eps");
  const std::size_t base = cfg.init.bumps.size();
  apply_override(cfg, "bump.0.amplitude", "0.5");
  CHECK(cfg.init.bumps[0].amplitude == 0.5);
  apply_override(cfg, std::string("bump.") + std::to_string(base) + ".target",
                 "v");
  CHECK(cfg.init.bumps.size() == base + 1);
  CHECK(cfg.init.bumps.back().target == Target::v);
  CHECK_THROWS(apply_override(cfg, "bump.9.width", "2.0"));  // gap
}

TEST_CASE("scalar parsing rejects malformed values") {
  RunConfig cfg;
  CHECK_THROWS(apply_override(cfg, "grid.n", "1.5"));
  CHECK_THROWS(apply_override(cfg, "grid.box", "wide"));
  CHECK_THROWS(apply_override(cfg, "output.svg", "yep"));
  CHECK_NOTHROW(apply_override(cfg, "output.svg", "false"));
  CHECK_NOTHROW(apply_override(cfg, "grid.n", "96"));
  CHECK(cfg.n == 96);
  CHECK(!cfg.write_svg);
}

TEST_CASE("validation catches inconsistent cadences and shapes") {
  RunConfig cfg;
  cfg.n = 63;
  CHECK_THROWS(validate(cfg));
  cfg = RunConfig{};
  cfg.record_every = 0.3;  // not an integer number of steps
  CHECK_THROWS(validate(cfg));
  cfg = RunConfig{};
  cfg.checkpoint_every = 0.75;  // not a multiple of record_every
  CHECK_THROWS(validate(cfg));
  cfg = RunConfig{};
  cfg.diag.track_reconstruction = true;  // needs companions
  CHECK_THROWS(validate(cfg));
  cfg.evolve_companions = true;
  CHECK_NOTHROW(validate(cfg));
  cfg = RunConfig{};
  cfg.t_final = -1.0;
  CHECK_THROWS(validate(cfg));
}

TEST_CASE("the printed schema covers every key") {
  const std::string text = schema_text();
  for (const ConfigKey& k : config_schema()) {
    CHECK(text.find(k.key) != std::string::npos);
    CHECK(text.find("[" + k.section + "]") != std::string::npos);
  }
}

TEST_CASE("unknown sections are rejected") {
  CHECK_THROWS(parse_config_text("[gird]\nn = 4\n", RunConfig{}));
  CHECK_THROWS(parse_config_text("[grid]\nn 128\n", RunConfig{}));
}
