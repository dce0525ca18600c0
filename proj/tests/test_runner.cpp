#include <regex>
#include <string>

#include "doctest.h"
#include "fvk/runner.hpp"

using namespace fvk;

namespace {

std::string strip_timings(const std::string& s) {
  // timings are informational; everything else must be byte-identical
  return std::regex_replace(s, std::regex("\"timings\"[^}]*\\}"), "");
}

}  // namespace

TEST_CASE("linear fit recovers exact lines") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(-2.5 * v + 0.75);
  const auto [slope, r2] = linear_fit(x, y);
  CHECK(slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("every preset is constructible") {
  const auto names = preset_names();
  CHECK(names.size() == 13);
  for (const auto& n : names) {
    const RunConfig c = make_preset(n);
    CHECK(!c.command.empty());
  }
  CHECK_THROWS_AS(make_preset("nope"), std::invalid_argument);
}

TEST_CASE("divergent preset exits with the certificate code") {
  RunConfig c = make_preset("ce12");
  c.n_hi = 5;  // keep the unit test fast
  const RunResult r = run_config(c);
  CHECK(r.exit_code == 3);
  CHECK(r.summary_json.find("\"divergence_certified\": true") != std::string::npos);
}

TEST_CASE("summaries are reproducible modulo timings") {
  RunConfig c;
  c.command = "gradcheck";
  c.nx = c.ny = 12;
  c.trials = 2;
  c.seed = 7;
  const RunResult a = run_config(c);
  const RunResult b = run_config(c);
  CHECK(a.exit_code == 0);
  CHECK(strip_timings(a.summary_json) == strip_timings(b.summary_json));
  CHECK(strip_timings(a.summary_json) != a.summary_json);  // timings were present

  c.seed = 8;  // a different seed actually changes the draw
  const RunResult d = run_config(c);
  CHECK(strip_timings(d.summary_json) != strip_timings(a.summary_json));
}

TEST_CASE("unknown command and bad geometry are usage errors") {
  RunConfig c;
  c.command = "frobnicate";
  CHECK(run_config(c).exit_code == 1);
  c.command = "energy";
  c.annulus = true;
  c.r1 = 2.0;
  c.r2 = 1.0;
  CHECK(run_config(c).exit_code == 1);
}

TEST_CASE("buckle command reports modes and critical thicknesses") {
  RunConfig c = make_preset("ex27");
  c.nodes_1d = 201;
  const RunResult r = run_config(c);
  CHECK(r.exit_code == 0);
  CHECK(r.scalars.at("k1") == doctest::Approx(4.0 * 9.8696).epsilon(2e-2));
  CHECK(r.scalars.at("h1") > 0.0);
}
