#include "wander/sched.hpp"

#include <boost/math/special_functions/fpclassify.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wander::sched {

namespace {

const Real& real_inf() {
  static const Real v = std::numeric_limits<Real>::infinity();
  return v;
}

double clamp_to_double(const Real& x) {
  if (x > Real(1e308)) return 1e308;
  if (x < Real(-1e308)) return -1e308;
  return double(x);
}

CheckRow make_row(std::string name, int k, int tier, const Real& lhs, const Real& rhs,
                  std::string note = {}) {
  CheckRow r;
  r.name = std::move(name);
  r.k = k;
  r.eval_tier = tier;
  r.lhs = clamp_to_double(lhs);
  r.rhs = clamp_to_double(rhs);
  r.pass = lhs <= rhs;
  r.margin = clamp_to_double(rhs - lhs);
  r.note = std::move(note);
  return r;
}

}  // namespace

Real exp_or_inf(const Real& x) {
  if (x > Real(1.6e9)) return real_inf();  // beyond the exponent range, avoid slow overflow path
  return exp(x);
}

Schedule::Schedule(double alpha, Family family, std::vector<Real> loglog)
    : alpha_(alpha), family_(family), loglog_(std::move(loglog)) {
  require(alpha_ > 0.0 && alpha_ < 1.0, "order parameter must lie in (0,1)");
  require(loglog_.size() >= 2, "ladder needs at least two radii");
  for (std::size_t i = 0; i < loglog_.size(); ++i) {
    require(boost::math::isfinite(loglog_[i]), "ladder entry overflows the log-log scale");
    require(loglog_[i] > 0, "ladder radii must exceed e");
    if (i > 0) require(loglog_[i] > loglog_[i - 1], "ladder must be strictly increasing");
  }
}

const Real& Schedule::loglog_tau(int k) const {
  require(k >= 1 && k <= size(), "ladder index out of range");
  return loglog_[std::size_t(k - 1)];
}

double Schedule::tau(int k) const {
  const Real& l2 = loglog_tau(k);
  if (l2 > Real(6.55)) return std::numeric_limits<double>::quiet_NaN();
  return double(exp(exp(l2)));
}

Real Schedule::rho(int k) const {
  require(k >= 1 && k + 1 <= size(), "rho needs the next radius");
  return Real(1) / loglog_tau(k + 1);
}

Real Schedule::gamma(int k) const {
  require(k >= 1 && k + 2 <= size(), "gamma needs two more radii");
  Real a = rho(k), b = rho(k + 1);
  return (a - b) / (Real(2) + a + b);
}

Real Schedule::r_ratio(int k) const { return (Real(1) + rho(k)) / (Real(1) + gamma(k)); }

Schedule make_doubleexp(double alpha, int k1, int count) {
  require(count >= 2, "ladder needs at least two radii");
  require(k1 >= 0 && k1 + count < 1000, "offset out of range");
  std::vector<Real> l2;
  for (int k = 1; k <= count; ++k) l2.push_back(ldexp(Real(1), k + k1));
  return Schedule(alpha, Family::kDoubleExp, std::move(l2));
}

Schedule make_exp_power(double alpha, double iota, double tau1, int count) {
  require(iota > 0, "scale factor must be positive");
  require(tau1 >= 3.0, "first radius must be >= 3");
  std::vector<Real> l2;
  Real cur = log(log(Real(tau1)));
  l2.push_back(cur);
  for (int k = 2; k <= count; ++k) {
    Real l1 = exp_or_inf(cur);
    require(boost::math::isfinite(l1),
            "exp-power ladder exceeds the representable range; use a double-exponential family "
            "for long ladders");
    cur = log(Real(iota)) + Real(alpha) * l1;
    l2.push_back(cur);
  }
  return Schedule(alpha, Family::kExpPower, std::move(l2));
}

Schedule make_explicit(double alpha, std::vector<double> taus) {
  std::vector<Real> l2;
  for (double t : taus) {
    require(t >= 3.0, "explicit radii must be >= 3");
    l2.push_back(log(log(Real(t))));
  }
  return Schedule(alpha, Family::kExplicit, std::move(l2));
}

Schedule schedule_from_json(const nlohmann::json& cfg) {
  std::string family = cfg.at("family").get<std::string>();
  double alpha = cfg.at("alpha").get<double>();
  if (family == "doubleexp")
    return make_doubleexp(alpha, cfg.value("k1", 3), cfg.at("count").get<int>());
  if (family == "exp_power")
    return make_exp_power(alpha, cfg.at("iota").get<double>(), cfg.at("tau1").get<double>(),
                          cfg.at("count").get<int>());
  if (family == "explicit")
    return make_explicit(alpha, cfg.at("taus").get<std::vector<double>>());
  throw std::runtime_error("unknown ladder family: " + family);
}

std::vector<CheckRow> check_growth_domination(const Schedule& s) {
  // 11 log tau_{k+1} <= tau_k^(alpha/7), compared as logs.
  std::vector<CheckRow> rows;
  const Real log11 = log(Real(11));
  for (int k = 1; k + 1 <= s.size(); ++k) {
    Real lhs2 = log11 + s.loglog_tau(k + 1);
    Real rhs2 = Real(s.alpha() / 7.0) * exp_or_inf(s.loglog_tau(k));
    if (boost::math::isfinite(rhs2)) {
      rows.push_back(make_row("growth_domination", k, 2, lhs2, rhs2));
    } else {
      // One more log: log lhs2 <= log(alpha/7) + loglog tau_k.
      Real lhs3 = log(lhs2);
      Real rhs3 = log(Real(s.alpha() / 7.0)) + s.loglog_tau(k);
      rows.push_back(make_row("growth_domination", k, 3, lhs3, rhs3, "compared one log deeper"));
    }
  }
  return rows;
}

std::vector<CheckRow> check_loglog_doubling(const Schedule& s) {
  std::vector<CheckRow> rows;
  for (int k = 1; k + 1 <= s.size(); ++k)
    rows.push_back(
        make_row("loglog_doubling", k, 2, Real(2) * s.loglog_tau(k), s.loglog_tau(k + 1)));
  return rows;
}

std::vector<CheckRow> check_tail_bounds(const Schedule& s) {
  std::vector<CheckRow> rows;
  const Real log2 = log(Real(2)), log4 = log(Real(4));
  for (int k = 1; k + 1 <= s.size(); ++k)
    rows.push_back(make_row("fourth_power_growth", k, 2, log4 + s.loglog_tau(k),
                            s.loglog_tau(k + 1)));
  for (int j = 1; j + 1 <= s.size(); ++j) {
    Real l1a = exp_or_inf(s.loglog_tau(j));
    Real l1b = exp_or_inf(s.loglog_tau(j + 1));
    if (boost::math::isfinite(l1a) && boost::math::isfinite(l1b)) {
      Real lhs = log2 - l1b;
      Real rhs = Real(2) * s.loglog_tau(j) - l1a;
      rows.push_back(make_row("tail_term_decay", j, 1, lhs, rhs));
    } else if (boost::math::isfinite(l1a)) {
      rows.push_back(make_row("tail_term_decay", j, 1, Real(-1e308), Real(0),
                              "next radius overflows; lhs underflows to 0"));
    } else {
      // Both overflow. log tau strictly increases and 2 loglog tau_j >= log 2
      // force the inequality; check those two facts instead.
      bool inc = s.loglog_tau(j + 1) > s.loglog_tau(j);
      bool big = Real(2) * s.loglog_tau(j) >= log2;
      CheckRow r = make_row("tail_term_decay", j, 1, Real(inc && big ? 0 : 1), Real(0),
                            "both radii overflow; pass by growth dominance");
      rows.push_back(r);
    }
  }
  {
    Real l1 = exp_or_inf(s.loglog_tau(1));
    if (boost::math::isfinite(l1))
      rows.push_back(make_row("first_term_unit", 1, 1, Real(2) * s.loglog_tau(1), l1));
    else
      rows.push_back(make_row("first_term_unit", 1, 1, Real(0), Real(0),
                              "first radius already astronomical; bound trivial"));
  }
  return rows;
}

std::vector<CheckRow> check_error_vs_collar(const Schedule& s) {
  // 3^k log^2 tau_k / tau_k < rho_k, compared as logs:
  // k log 3 + 2 loglog tau_k - log tau_k < -log loglog tau_{k+1}.
  std::vector<CheckRow> rows;
  const Real log3 = log(Real(3));
  for (int k = 1; k + 1 <= s.size(); ++k) {
    Real small = Real(k) * log3 + Real(2) * s.loglog_tau(k);
    Real rhs = -log(s.loglog_tau(k + 1));
    Real l1 = exp_or_inf(s.loglog_tau(k));
    if (boost::math::isfinite(l1)) {
      rows.push_back(make_row("error_vs_collar", k, 1, small - l1, rhs));
    } else {
      // log tau_k exceeds the float max M. small - rhs <= M < log tau_k
      // rearranges to the target inequality, so compare against M.
      Real m = std::numeric_limits<Real>::max();
      rows.push_back(
          make_row("error_vs_collar", k, 1, small - rhs, m, "pass by overflow dominance"));
    }
  }
  return rows;
}

std::vector<CheckRow> check_collar_geometry(const Schedule& s) {
  std::vector<CheckRow> rows;
  for (int k = 1; k + 1 <= s.size(); ++k)
    rows.push_back(make_row("collar_width", k, 0, s.rho(k), Real(0.25)));
  for (int k = 1; k + 2 <= s.size(); ++k) {
    rows.push_back(make_row("ring_gap_lower", k, 0, s.rho(k) / Real(5), s.gamma(k)));
    rows.push_back(make_row("ring_gap_upper", k, 0, s.gamma(k), s.rho(k) / Real(2)));
  }
  return rows;
}

std::vector<CheckRow> check_all(const Schedule& s) {
  std::vector<CheckRow> rows;
  for (auto f : {check_growth_domination, check_loglog_doubling, check_tail_bounds,
                 check_error_vs_collar, check_collar_geometry}) {
    auto part = f(s);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

nlohmann::ordered_json rows_to_json(const std::vector<CheckRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["k"] = r.k;
    j["pass"] = r.pass;
    j["eval_tier"] = r.eval_tier;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::ordered_json schedule_to_json(const Schedule& s) {
  nlohmann::ordered_json out;
  out["alpha"] = s.alpha();
  out["family"] = s.family() == Family::kDoubleExp  ? "doubleexp"
                  : s.family() == Family::kExpPower ? "exp_power"
                                                    : "explicit";
  auto& arr = out["radii"] = nlohmann::ordered_json::array();
  auto maybe = [](double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  };
  for (int k = 1; k <= s.size(); ++k) {
    nlohmann::ordered_json j;
    j["k"] = k;
    j["loglog_tau"] = clamp_to_double(s.loglog_tau(k));
    j["tau"] = maybe(s.tau(k));
    if (k + 1 <= s.size()) j["rho"] = double(s.rho(k));
    if (k + 2 <= s.size()) {
      j["gamma"] = double(s.gamma(k));
      j["r"] = double(s.r_ratio(k));
    }
    arr.push_back(std::move(j));
  }
  return out;
}

LayerPoints layer_points(const std::function<Complex(Complex)>& map, double rho, double r,
                         double c_u, double margin) {
  require(rho > 0 && r > 0 && c_u > 0 && margin > 0, "layer parameters must be positive");
  double raw = kTwoPi * (1.0 + rho) / (c_u * r * rho * margin);
  require(raw >= 3.0, "layer ring would have fewer than 3 points");
  require(raw <= 1e6, "layer ring would have over 1e6 points");
  LayerPoints out;
  out.count = int(raw);
  for (int j = 0; j < out.count; ++j) {
    Complex w = std::polar(1.0 + rho, kTwoPi * j / out.count);
    out.preimages.push_back(w);
    out.points.push_back(map(w));
  }
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (int j = 0; j < out.count; ++j) {
    double d = std::abs(out.points[std::size_t(j)] -
                        out.points[std::size_t((j + 1) % out.count)]);
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  out.min_separation = mn;
  out.max_gap = mx;
  return out;
}

}  // namespace wander::sched
