#include <sstream>

#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace liokam;

TEST_CASE("parse a config with comments") {
  std::istringstream is(
      "# header\n"
      "alpha = silver\n"
      "\n"
      "epsilon = 1e-9   # trailing comment\n"
      "K.cap=128\n"
      "force = yes\n");
  const RunConfig c = parse_config(is, "mem");
  CHECK(c.alpha == "silver");
  CHECK(c.epsilon == 1e-9);
  CHECK(c.K_cap == 128);
  CHECK(c.force);
  CHECK(c.gamma == RunConfig{}.gamma);
}

TEST_CASE("unknown keys and bad values name the key") {
  std::istringstream a("alpha = golden\nbogus.key = 3\n");
  try {
    parse_config(a, "f.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(m.find("bogus.key") != std::string::npos);
    CHECK(m.find("f.cfg:2") != std::string::npos);
  }
  RunConfig c;
  CHECK_THROWS_AS(apply_setting(c, "N_max", "three"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "force", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "epsilon", "1e-8x"), ConfigError);
  std::istringstream noeq("alpha golden\n");
  CHECK_THROWS_AS(parse_config(noeq, "x"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/liokam.cfg"), ConfigError);
}

TEST_CASE("canonical text round trip") {
  RunConfig c;
  apply_setting(c, "alpha", "cf:1,2,3");
  apply_setting(c, "gamma", "0.0123");
  apply_setting(c, "seed", "99");
  const std::string t = to_string(c);
  std::istringstream is(t);
  const RunConfig d = parse_config(is, "roundtrip");
  CHECK(to_string(d) == t);
  CHECK(d.alpha == "cf:1,2,3");
  CHECK(d.gamma == 0.0123);
  CHECK(d.seed == 99);
  // every key appears
  for (const auto& k : config_keys()) {
    const bool present = t.rfind(k + " = ", 0) == 0 || t.find("\n" + k + " = ") != std::string::npos;
    CHECK_MESSAGE(present, k);
  }
}
