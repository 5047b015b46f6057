#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wander/types.hpp"

namespace wander::sched {

// Wide-exponent float for the growth ladder; tau itself is usually beyond any
// float, so entries live at the log-log level and drop tiers only on demand.
using Real = boost::multiprecision::cpp_bin_float_50;

Real exp_or_inf(const Real& x);

enum class Family { kDoubleExp, kExpPower, kExplicit };

// Radius ladder tau_1 < tau_2 < ... stored as loglog tau_k (1-based k).
class Schedule {
 public:
  Schedule(double alpha, Family family, std::vector<Real> loglog);

  double alpha() const { return alpha_; }
  Family family() const { return family_; }
  int size() const { return int(loglog_.size()); }

  const Real& loglog_tau(int k) const;
  Real log_tau_or_inf(int k) const { return exp_or_inf(loglog_tau(k)); }
  // NaN when tau overflows double.
  double tau(int k) const;

  // rho_k = 1/loglog tau_{k+1}, defined for k = 1 .. size-1.
  Real rho(int k) const;
  // gamma_k = (rho_k - rho_{k+1}) / (2 + rho_k + rho_{k+1}), k = 1 .. size-2.
  Real gamma(int k) const;
  // r_k = (1 + rho_k) / (1 + gamma_k); the stage-k rescaling radius.
  Real r_ratio(int k) const;

 private:
  double alpha_;
  Family family_;
  std::vector<Real> loglog_;
};

Schedule make_doubleexp(double alpha, int k1, int count);
// tau_{k+1} = exp(iota * tau_k^alpha); stops with an error once the log-log
// value itself overflows (tower growth outruns any fixed-exponent float).
Schedule make_exp_power(double alpha, double iota, double tau1, int count);
Schedule make_explicit(double alpha, std::vector<double> taus);
Schedule schedule_from_json(const nlohmann::json& cfg);

// One admissibility comparison; margin is rhs - lhs in the space named by
// eval_tier (0 plain, 1 log, 2 loglog), so pass <=> margin >= 0.
struct CheckRow {
  std::string name;
  int k = 0;
  bool pass = false;
  int eval_tier = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string note;
};

// 11 log tau_{k+1} <= tau_k^(alpha/7), k = 1 .. size-1.
std::vector<CheckRow> check_growth_domination(const Schedule& s);
// loglog tau_{k+1} >= 2 loglog tau_k, k = 1 .. size-1.
std::vector<CheckRow> check_loglog_doubling(const Schedule& s);
// tau_{k+1} >= tau_k^4, 2/tau_{j+1} < log^2 tau_j / tau_j, log^2 tau_1 <= tau_1.
std::vector<CheckRow> check_tail_bounds(const Schedule& s);
// 3^k log^2 tau_k / tau_k < rho_k, k = 1 .. size-1.
std::vector<CheckRow> check_error_vs_collar(const Schedule& s);
// rho_k <= 1/4 and rho_k/5 <= gamma_k <= rho_k/2.
std::vector<CheckRow> check_collar_geometry(const Schedule& s);

std::vector<CheckRow> check_all(const Schedule& s);
nlohmann::ordered_json rows_to_json(const std::vector<CheckRow>& rows);
nlohmann::ordered_json schedule_to_json(const Schedule& s);

struct LayerPoints {
  int count = 0;
  std::vector<Complex> preimages;  // on |w| = 1 + rho
  std::vector<Complex> points;     // map(preimages)
  double min_separation = 0.0;
  double max_gap = 0.0;
};

// Equally spaced ring of count = floor(2 pi (1+rho) / (c_u * r * rho * margin))
// points on the inflated circle, pushed through the domain map.
LayerPoints layer_points(const std::function<Complex(Complex)>& map, double rho, double r,
                         double c_u, double margin);

}  // namespace wander::sched
