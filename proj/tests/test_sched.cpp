#include <doctest.h>

#include <chrono>

#include "wander/sched.hpp"

using namespace wander;
using namespace wander::sched;

TEST_CASE("double-exponential ladder stores exact loglog values") {
  auto s = make_doubleexp(0.5, 3, 10);
  CHECK(s.loglog_tau(1) == Real(16));
  CHECK(s.loglog_tau(5) == Real(256));
  CHECK(s.rho(1) == Real(1) / Real(32));
  // gamma_k = (rho_k - rho_{k+1}) / (2 + rho_k + rho_{k+1}) stays within the
  // collar bounds for a doubling ladder.
  CHECK(double(s.gamma(1)) == doctest::Approx((1.0 / 32 - 1.0 / 64) / (2 + 1.0 / 32 + 1.0 / 64)));
}

TEST_CASE("growth domination at the first rung matches the closed form") {
  auto s = make_doubleexp(0.5, 3, 4);
  auto rows = check_growth_domination(s);
  REQUIRE(rows.size() == 3);
  // lhs = log(11 * log tau_2) = log 11 + 32; rhs = (alpha/7) log tau_1 = e^16/14.
  CHECK(rows[0].eval_tier == 2);
  CHECK(rows[0].lhs == doctest::Approx(std::log(11.0) + 32.0).epsilon(1e-12));
  CHECK(rows[0].rhs == doctest::Approx(std::exp(16.0) / 14.0).epsilon(1e-12));
  CHECK(rows[0].pass);
}

TEST_CASE("all admissibility checks pass for a hundred-rung doubling ladder") {
  auto t0 = std::chrono::steady_clock::now();
  auto s = make_doubleexp(0.5, 3, 100);
  auto rows = check_all(s);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  CHECK(rows.size() > 500);
  for (const auto& r : rows) {
    INFO(r.name, " k=", r.k);
    CHECK(r.pass);
  }
  CHECK(ms < 1000);
}

TEST_CASE("deep rungs switch to higher comparison tiers") {
  auto s = make_doubleexp(0.5, 3, 100);
  auto rows = check_growth_domination(s);
  bool saw_t2 = false, saw_t3 = false;
  for (const auto& r : rows) (r.eval_tier == 2 ? saw_t2 : saw_t3) = true;
  CHECK(saw_t2);
  CHECK(saw_t3);
}

TEST_CASE("toy ladder collar values") {
  auto s = make_explicit(0.5, {20.0, 200.0, 2000.0, 3e5});
  CHECK(double(s.rho(1)) == doctest::Approx(0.599727).epsilon(1e-4));
  CHECK(double(s.rho(2)) == doctest::Approx(0.493032).epsilon(1e-4));
  CHECK(double(s.rho(3)) == doctest::Approx(0.394537).epsilon(1e-4));
  CHECK(double(s.gamma(2)) == doctest::Approx(0.034110).epsilon(1e-3));
  CHECK(double(s.r_ratio(2)) == doctest::Approx(1.44378).epsilon(1e-4));
  CHECK(s.tau(1) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(s.tau(4) == doctest::Approx(3e5).epsilon(1e-12));
}

TEST_CASE("toy ladder fails the collar checks it should fail") {
  auto s = make_explicit(0.5, {20.0, 200.0, 2000.0, 3e5});
  auto collar = check_collar_geometry(s);
  int width_fail = 0;
  for (const auto& r : collar)
    if (r.name == "collar_width" && !r.pass) ++width_fail;
  CHECK(width_fail == 3);  // every toy rho exceeds 1/4

  // Every toy rung has 3^k log^2 tau_k / tau_k wider than its collar.
  auto err = check_error_vs_collar(s);
  REQUIRE(err.size() == 3);
  for (const auto& r : err) CHECK_FALSE(r.pass);
}

TEST_CASE("a hundredfold larger explicit ladder clears the collar check") {
  auto s = make_explicit(0.5, {200.0, 2000.0, 4e4, 4e6});
  for (const auto& r : check_error_vs_collar(s)) {
    INFO("k=", r.k);
    CHECK(r.pass);
  }
}

TEST_CASE("exp-power ladder materializes small rungs and rejects towers") {
  auto s = make_exp_power(0.5, 1.0, 20.0, 6);
  CHECK(s.tau(1) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(s.tau(2) == doctest::Approx(std::exp(std::sqrt(20.0))).epsilon(1e-10));
  CHECK_THROWS(make_exp_power(0.5, 1.0, 20.0, 12));
}

TEST_CASE("schedule json round trip") {
  nlohmann::json cfg = {{"family", "doubleexp"}, {"alpha", 0.5}, {"k1", 3}, {"count", 5}};
  auto s = schedule_from_json(cfg);
  auto j = schedule_to_json(s);
  CHECK(j["alpha"] == 0.5);
  CHECK(j["radii"].size() == 5);
  CHECK(j["radii"][0]["loglog_tau"] == 16.0);
  CHECK(j["radii"][0]["tau"].is_null());  // e^(e^16) has no double form
  nlohmann::json cfg2 = {{"family", "explicit"}, {"alpha", 0.5}, {"taus", {20.0, 200.0, 2000.0}}};
  CHECK(schedule_from_json(cfg2).size() == 3);
}

TEST_CASE("layer ring count matches the arc formula") {
  auto id = [](Complex w) { return w; };
  auto lp = layer_points(id, 0.1, 1.05, 2.0, 1.0);
  CHECK(lp.count == 32);
  double chord = 2.0 * 1.1 * std::sin(kPi / 32.0);
  CHECK(lp.min_separation == doctest::Approx(chord).epsilon(1e-12));
  CHECK(lp.max_gap == doctest::Approx(chord).epsilon(1e-12));
  CHECK(std::abs(lp.preimages[0] - Complex(1.1, 0.0)) < 1e-15);
}

TEST_CASE("exp guard saturates instead of overflowing") {
  CHECK(boost::math::isfinite(exp_or_inf(Real(100))));
  CHECK(!boost::math::isfinite(exp_or_inf(Real(2e9))));
}
