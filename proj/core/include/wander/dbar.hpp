#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wander/grid.hpp"
#include "wander/region.hpp"
#include "wander/subharm.hpp"
#include "wander/types.hpp"

namespace wander::dbar {

enum class Profile { quintic, bump };

// Smooth transition glued to the distance function of a union of regions:
// chi = psi(dist/eps) with psi(0) = 1, psi(1) = 0. The regions must be
// pairwise 4 eps separated so at most one collar is active anywhere and the
// union distance stays smooth on the band.
class CutOff {
 public:
  CutOff() = default;  // empty sentinel; assign a real one before use
  CutOff(std::vector<RegionPtr> regions, double eps, Profile profile = Profile::quintic);

  double chi(Complex z) const;
  // analytic: psi'(t)/eps times dbar of the distance, which is dir/2
  Complex dbar_chi(Complex z) const;

  double eps() const { return eps_; }
  Profile profile() const { return profile_; }
  // sup |psi'|, measured by a dense parameter scan at construction
  double gradient_constant() const { return grad_const_; }
  double separation_measured() const { return separation_; }
  const std::vector<RegionPtr>& regions() const { return regions_; }

  double dist(Complex z) const;  // to the union
  bool in_band(Complex z) const {
    double d = dist(z);
    return d > 0.0 && d < eps_;
  }
  BoundingBox band_bbox() const;

  double profile_value(double t) const;
  double profile_slope(double t) const;

 private:
  std::vector<RegionPtr> regions_;
  double eps_ = 0.0;
  Profile profile_ = Profile::quintic;
  double grad_const_ = 0.0;
  double separation_ = 0.0;
};

// Bundle for one correction problem: model map holomorphic where chi > 0,
// weight, and the quadrature grid that resolves the transition band.
struct DbarProblem {
  std::function<Complex(Complex)> h;
  CutOff chi;
  subharm::Weight u;
  ComplexGrid band;
};

// Grid of cell spacing eps/cells_across covering the band box with a two
// cell margin.
ComplexGrid make_band_grid(const CutOff& chi, int cells_across = 8);

// g = dbar(chi) h at band cell centers; zero off the band.
ComplexGrid sample_source(const DbarProblem& p, int threads = 1);

struct IntegralReport {
  double log_i = 0.0;  // log of the half weighted L2 mass, halved
  double i = 0.0;      // exp(log_i); may underflow to 0 harmlessly
  double rel_refinement = 0.0;  // coarse grid disagreement, relative
  std::size_t cells = 0;
};

// I = sqrt(1/2 sum |g|^2 e^{-u} cell_area) by midpoint quadrature, carried in
// log space so huge weights cannot overflow. Throws when the weight has a
// well on the support of g or the model map is not finite there.
IntegralReport hormander_integral(const DbarProblem& p, int threads = 1);

struct ResidualReport {
  double band_rel_avg = 0.0;   // avg |fd dbar beta - g| / avg |g| at support centers
  double off_band_rel_max = 0.0;  // max |fd dbar beta| / sup |g| off the support
  double g_scale = 0.0;
  int band_samples = 0;
  int off_samples = 0;
};

// Particular solution via the Cauchy transform of the sampled source: exact
// closed-form integral over the containing cell, midpoint kernel elsewhere.
class DbarSolution {
 public:
  Complex beta(Complex z) const;
  double log_i() const { return log_i_; }
  double i_value() const { return std::exp(log_i_); }
  const std::string& solver_kind() const { return kind_; }
  const ResidualReport& residual() const { return residual_; }
  std::size_t support_size() const { return centers_.size(); }
  const std::vector<Complex>& correction_poly() const { return poly_; }

  friend DbarSolution solve_dbar_cauchy(const ComplexGrid& g, double log_i);
  friend DbarSolution project_minimal(const DbarSolution& sol, const subharm::Weight& u,
                                      int degree, double radius);

 private:
  std::vector<Complex> centers_;  // support cell centers
  std::vector<Complex> g_;        // source values there
  double h_ = 0.0;                // cell spacing
  double log_i_ = -std::numeric_limits<double>::infinity();
  std::string kind_ = "cauchy";
  std::vector<Complex> poly_;  // subtracted polynomial, lowest degree first
  ResidualReport residual_;
};

// log_i is carried into the solution for the certificates; pass the value
// from hormander_integral, or -inf when no weight is in play.
DbarSolution solve_dbar_cauchy(const ComplexGrid& g, double log_i);

// exact integral of dA(w)/(z - w) over the axis-aligned square cell; z must
// not sit on the cell boundary
Complex cell_cauchy_integral(Complex z, Complex center, double h);

// Finite-difference check of dbar beta against the sampled source at support
// centers and against zero outside the support box.
ResidualReport measure_residual(const DbarSolution& sol, const ComplexGrid& g,
                                int max_band_samples = 200, int off_samples = 64);

// Least-squares coefficients of the projection of f onto polynomials of
// degree <= degree in the weighted inner product with density
// e^{-u}/(1+|z|^2)^2 over B(0, radius). Plain monomial normal equations;
// throws on ill-conditioning, pointing at the orthogonalized fitter.
std::vector<Complex> weighted_poly_projection(const std::function<Complex(Complex)>& f,
                                              const subharm::Weight& u, int degree, double radius,
                                              int nr = 96, int nt = 256);

DbarSolution project_minimal(const DbarSolution& sol, const subharm::Weight& u, int degree,
                             double radius);

struct InequalityReport {
  double lhs = 0.0;  // weighted mass of beta over B(0, R), truncated
  double rhs = 0.0;  // I^2
  double ratio = 0.0;
  bool holds = false;
};

InequalityReport hormander_inequality(const std::function<Complex(Complex)>& beta,
                                      const subharm::Weight& u, double log_i, double radius,
                                      int nr = 96, int nt = 256);

// F = chi h - beta with its ingredients, the object the certificates speak
// about.
struct Assembly {
  CutOff chi;
  std::function<Complex(Complex)> h;
  DbarSolution sol;
  subharm::Weight u;

  Complex model(Complex z) const {  // chi h, zero where chi vanishes
    double c = chi.chi(z);
    return c == 0.0 ? Complex{0.0, 0.0} : c * h(z);
  }
  Complex f(Complex z) const { return model(z) - sol.beta(z); }
};

Assembly assemble(CutOff chi, std::function<Complex(Complex)> h, DbarSolution sol,
                  subharm::Weight u);

struct BoundReport {
  std::string name;
  Complex z;
  double r = 0.0;
  double lhs = 0.0;
  double log_rhs = 0.0;
  double rhs = 0.0;  // exp(log_rhs); inf on overflow
  bool rhs_overflow = false;
  bool pass = false;
  nlohmann::ordered_json to_json() const;
};

// |F(z) - h(z)| against (2+2|z|^2)/r I max e^{u/2} over B(z,r); requires
// chi == 1 on the disk and r <= max(1, |z|/3).
BoundReport certify_error_bound(const Assembly& a, Complex z, double r);

// |F(z)| against max |chi h| over B(z,1) plus (2+2|z|^2)/sqrt(pi) I max e^{u/2}.
BoundReport certify_growth_bound(const Assembly& a, Complex z);

struct DerivativeReport {
  double bound = 0.0;     // circle max of |F - G| over r
  double measured = 0.0;  // |F'(z) - G'(z)| via the Cauchy integral
  bool pass = false;
};

DerivativeReport derivative_bound(const std::function<Complex(Complex)>& f,
                                  const std::function<Complex(Complex)>& g, Complex z, double r,
                                  int nodes = 256);

// Weighted polynomial least squares in an orthonormal basis built by the
// Arnoldi recurrence on the sample nodes; stable at degrees where plain
// monomials are hopeless. Evaluation replays the recurrence.
struct FitSample {
  Complex z;
  Complex target;
  double weight = 1.0;
};

class PolyGauge {
 public:
  Complex eval(Complex z) const;
  int degree() const { return int(dcoef_.size()) - 1; }
  double residual() const { return residual_; }  // weighted rms on the fit nodes
  double weighted_rms(const std::vector<FitSample>& samples) const;

  friend PolyGauge fit_poly_gauge(const std::vector<FitSample>& samples, int degree);

 private:
  std::vector<std::vector<Complex>> hess_;  // column k holds H(0..k+1, k)
  std::vector<Complex> dcoef_;
  double norm0_ = 1.0;  // weighted norm of the constant basis seed
  double residual_ = 0.0;
};

PolyGauge fit_poly_gauge(const std::vector<FitSample>& samples, int degree);

}  // namespace wander::dbar
