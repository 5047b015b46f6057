#include "wander/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wander::construct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slog(double x) { return x > 0.0 ? std::log(x) : -kInf; }

double sexp(double lx) {
  if (lx > 709.0) return kInf;
  return std::exp(lx);
}

// log(e^a + e^b) without overflow
double logsum(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

std::string fmt_tag(double delta) {
  std::ostringstream os;
  os << "em" << int(std::lround(-std::log(delta)));
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// certificate rows

nlohmann::ordered_json CertRow::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["lhs"] = std::isfinite(lhs) ? nlohmann::ordered_json(lhs) : nlohmann::ordered_json("overflow");
  j["rhs"] = std::isfinite(rhs) ? nlohmann::ordered_json(rhs) : nlohmann::ordered_json("overflow");
  j["log_lhs"] = log_lhs;
  j["log_rhs"] = log_rhs;
  j["pass"] = pass;
  j["waived"] = waived;
  if (!citation.empty()) j["citation"] = citation;
  if (!note.empty()) j["note"] = note;
  return j;
}

CertRow cert_linear(std::string name, double lhs, double rhs, std::string note) {
  CertRow r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.log_lhs = slog(lhs);
  r.log_rhs = slog(rhs);
  r.pass = lhs <= rhs;
  r.note = std::move(note);
  return r;
}

CertRow cert_log(std::string name, double log_lhs, double log_rhs, std::string note) {
  CertRow r;
  r.name = std::move(name);
  r.log_lhs = log_lhs;
  r.log_rhs = log_rhs;
  r.lhs = sexp(log_lhs);
  r.rhs = sexp(log_rhs);
  r.pass = log_lhs <= log_rhs;
  r.note = std::move(note);
  return r;
}

void waive(CertRow& row, std::string citation) {
  row.waived = true;
  row.citation = std::move(citation);
}

int apply_waivers(std::vector<CertRow>& rows, const std::vector<std::string>& ids,
                  const std::string& citation) {
  int n = 0;
  for (CertRow& r : rows) {
    if (r.pass || r.waived) continue;
    for (const std::string& id : ids) {
      bool hit = id.size() > 1 && id.back() == '*'
                     ? r.name.compare(0, id.size() - 1, id, 0, id.size() - 1) == 0
                     : r.name == id;
      if (hit) {
        waive(r, citation);
        ++n;
        break;
      }
    }
  }
  return n;
}

bool all_pass_or_waived(const std::vector<CertRow>& rows) {
  for (const CertRow& r : rows)
    if (!r.pass && !r.waived) return false;
  return true;
}

nlohmann::ordered_json rows_json(const std::vector<CertRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CertRow& r : rows) arr.push_back(r.to_json());
  return arr;
}

// ---------------------------------------------------------------------------
// local lemma scaffolding

void LocalLemmaParams::validate() const {
  validate_structure();
  require(a_const > 2.0, "far plateau height must exceed 2");
  require(tau >= a_const, "translation must dominate the plateau height");
  require(3.0 * eps * std::log(1.0 / eps) < kappa * eta,
          "roundness hypothesis 3 eps log(1/eps) < kappa eta fails");
}

// checks whose failure would break the run geometry outright; the value
// hypotheses validate() adds are certified as rows instead so a rescaled
// stage can run them red
void LocalLemmaParams::validate_structure() const {
  require(kappa > 0.0 && kappa < 0.2, "collar fraction outside (0, 1/5)");
  require(eta > 0.0 && eta <= 0.25, "layer scale outside (0, 1/4]");
  require(a_const > 0.0, "far plateau height must be positive");
  require(tau > 0.0, "translation must be positive");
  require(eps > 0.0 && eps < std::exp(-2.0), "roundness must be below e^-2");
  require(s > 0.0 && s < 1.0, "pin scale outside (0,1)");
  double lo = 1.0 + eta - eps, hi = 1.0 + eta + eps;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r = std::abs(points[i]);
    require(r >= lo && r <= hi, "layer point off the layer annulus");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      require(std::abs(points[i] - points[j]) >= 2.0 * eta / 5.0,
              "layer wells overlap");
  }
}

LocalLemmaGeometry local_geometry(const LocalLemmaParams& p) {
  LocalLemmaGeometry g;
  double ke = p.kappa * p.eta;
  g.chi_one_inner = 1.0 - ke / 2.0;
  g.chi_zero_inner = 1.0 - ke / 4.0;
  g.chi_zero_outer = 1.0 + ke / 4.0;
  g.chi_one_outer = 1.0 + ke / 2.0;
  g.layer_inner = 1.0 + 3.0 * p.eta / 5.0;
  g.layer_outer = 1.0 + 7.0 * p.eta / 5.0;
  g.glue_inner = 1.0 + 2.0 * p.eta;
  g.glue_outer = 1.0 + 3.0 * p.eta;
  g.well_radius = p.eta / 5.0;
  return g;
}

ErrorBudget error_budget(const LocalLemmaParams& p, double d) {
  ErrorBudget b;
  b.d = d;
  b.log_e1 = std::log(d) + std::log(p.tau) - 1.5 * std::log(p.eta) - 0.5 * std::log(p.kappa);
  b.e1 = sexp(b.log_e1);
  double ex = 1.0 / p.eta - p.kappa / 2.0;
  b.log_e2 = ex > 700.0 ? -kInf : -(p.kappa / 2.0) * std::exp(ex);
  return b;
}

LocalModel identity_model() {
  LocalModel m;
  m.phi = [](Complex z) { return z; };
  m.phi_inv = [](Complex z) { return z; };
  m.phi_prime0 = Complex{1.0, 0.0};
  return m;
}

subharm::Weight local_weight(const LocalLemmaParams& p) {
  LocalLemmaGeometry g = local_geometry(p);
  subharm::Weight w;
  w.add_piece(std::make_shared<DiskRegion>(Disk{Complex{0, 0}, g.glue_outer}),
              subharm::exp_radial(p.eta));
  double tail_c = (2.0 * std::exp(3.0) / p.eta) * std::exp(1.0 / p.eta);
  w.add_piece(std::make_shared<ComplementOfDisks>(
                  std::vector<Disk>{Disk{Complex{0, 0}, g.glue_inner}}, 4.0),
              subharm::log_radial(tail_c, g.glue_inner));
  for (const Complex& a : p.points) {
    Disk d{a, g.well_radius};
    require(w.lap_lower(d) > 0.0, "layer well has no Laplacian budget");
    w.apply_puncture(d);
  }
  return w;
}

nlohmann::ordered_json FitZones::describe() const {
  nlohmann::ordered_json j;
  j["pin_log_boost"] = pin_log_boost;
  j["core_log_boost"] = core_log_boost;
  j["collar_log_drop"] = collar_log_drop;
  j["plateau_log_drop"] = plateau_log_drop;
  j["gap_log_drop"] = gap_log_drop;
  j["core_rings"] = core_rings;
  j["angles"] = angles;
  return j;
}

LocalRunConfig::LocalRunConfig() {
  deltas = {std::exp(-2.0), std::exp(-3.0), std::exp(-4.0)};
  growth_radii = {3.0, 5.0, 8.0};
}

Complex LocalLemmaRun::g(Complex z) const { return gauge.eval(z) - params.a_const; }

Complex LocalLemmaRun::model_h(Complex z) const {
  double c = chi.chi(z);
  return c == 0.0 ? Complex{0.0, 0.0} : c * h_fn(z);
}

Complex LocalLemmaRun::beta(Complex z) const {
  return model_h(z) + params.a_const - gauge.eval(z);
}

nlohmann::ordered_json LocalLemmaRun::to_json() const {
  nlohmann::ordered_json j;
  j["kappa"] = params.kappa;
  j["eta"] = params.eta;
  j["a_const"] = params.a_const;
  j["tau"] = params.tau;
  j["eps"] = params.eps;
  j["s"] = params.s;
  // the closed-form pin scale; it underflows doubles at small c, which is why
  // s is configured rather than computed
  j["s_formula"] = "exp(-25 e^2 / c)";
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const Complex& a : params.points) pts.push_back({a.real(), a.imag()});
  j["points"] = pts;
  j["log_i"] = integral.log_i;
  j["integral_cells"] = integral.cells;
  j["fit_degree"] = gauge.degree();
  j["fit_residual"] = fit_residual;
  j["d_e1"] = d_e1;
  j["d_l1"] = d_l1;
  j["d_l3"] = d_l3;
  j["telescope_defect"] = telescope_defect;
  j["weight"] = weight.describe();
  j["certificates"] = rows_json(certs);
  return j;
}

// ---------------------------------------------------------------------------
// the lemma run

namespace {

struct SampleSet {
  std::vector<dbar::FitSample> samples;

  void ring(const std::function<Complex(Complex)>& target, Complex center, double radius,
            int angles, double log_w, double phase = 0.0) {
    for (int i = 0; i < angles; ++i) {
      double t = kTwoPi * (double(i) + phase) / double(angles);
      Complex z = center + radius * Complex{std::cos(t), std::sin(t)};
      samples.push_back({z, target(z), sexp(log_w)});
    }
  }
  void point(const std::function<Complex(Complex)>& target, Complex z, double log_w) {
    samples.push_back({z, target(z), sexp(log_w)});
  }
};

int adaptive_cells_across(const dbar::CutOff& chi, int want, std::size_t cap) {
  BoundingBox bb = chi.band_bbox();
  double wx = bb.hi.real() - bb.lo.real();
  double wy = bb.hi.imag() - bb.lo.imag();
  int ca = want;
  while (ca > 2) {
    double h = chi.eps() / double(ca);
    double cells = (wx / h + 5.0) * (wy / h + 5.0);
    if (cells <= double(cap)) break;
    --ca;
  }
  return ca;
}

double max_on_ring(const std::function<double(Complex)>& f, Complex c, double r, int n) {
  double m = -kInf;
  for (int i = 0; i < n; ++i) {
    double t = kTwoPi * double(i) / double(n);
    m = std::max(m, f(c + r * Complex{std::cos(t), std::sin(t)}));
  }
  return m;
}

}  // namespace

LocalLemmaRun run_local_lemma(const LocalLemmaParams& p, const LocalModel& m,
                              const LocalRunConfig& cfg) {
  p.validate_structure();
  LocalLemmaRun run;
  run.params = p;
  run.geom = local_geometry(p);
  const LocalLemmaGeometry& gm = run.geom;
  const double A = p.a_const;

  run.weight = local_weight(p);
  double ke4 = p.kappa * p.eta / 4.0;
  std::vector<RegionPtr> chi_regions{
      std::make_shared<DiskRegion>(Disk{Complex{0, 0}, gm.chi_one_inner}),
      std::make_shared<ComplementOfDisks>(
          std::vector<Disk>{Disk{Complex{0, 0}, gm.chi_one_outer}}, 4.0 * ke4)};
  run.chi = dbar::CutOff(chi_regions, ke4 * (1.0 - 1e-9));

  double zero_inner = gm.chi_zero_inner;
  auto phi_inv = m.phi_inv;
  double tau = p.tau;
  run.h_fn = [phi_inv, tau, A, zero_inner](Complex z) {
    return std::abs(z) < zero_inner ? phi_inv(z) + tau : Complex{-A, 0.0};
  };

  // certificates accumulate here
  std::vector<CertRow>& certs = run.certs;
  certs.push_back(cert_linear("roundness_hypothesis", 3.0 * p.eps * std::log(1.0 / p.eps),
                              p.kappa * p.eta));
  certs.push_back(cert_linear("plateau_hypothesis", 2.0, A, "far constant above 2"));
  certs.push_back(
      cert_linear("translation_hypothesis", A, p.tau, "translation dominates the plateau"));

  {
    subharm::GlueReport out = subharm::check_glue_interface(run.weight, 1, 0);
    certs.push_back(cert_linear("weight_glue_outward", -out.worst_margin, 0.0,
                                "log tail dominates the exp piece on its rim"));
    subharm::GlueReport in = subharm::check_glue_interface(run.weight, 0, 1);
    certs.push_back(cert_linear("weight_glue_inward", -in.worst_margin, 0.0,
                                "exp piece dominates the log tail where it starts"));
  }
  {
    // submean probes across every zone, wells included
    std::vector<Complex> probes;
    std::vector<double> radii;
    auto add_ring = [&](double r, int n, double pr) {
      for (int i = 0; i < n; ++i) {
        double t = kTwoPi * (double(i) + 0.37) / double(n);
        probes.push_back(r * Complex{std::cos(t), std::sin(t)});
        radii.push_back(pr);
      }
    };
    add_ring(0.5, 8, 1e-3);
    add_ring(gm.chi_one_inner, 8, 1e-3);
    add_ring(1.0, 8, 1e-3);
    add_ring(gm.chi_one_outer, 8, 1e-3);
    add_ring(1.0 + p.eta, 12, 1e-3);
    add_ring(gm.glue_inner, 8, 1e-3);
    add_ring(gm.glue_outer, 8, 1e-3);
    add_ring(gm.glue_outer + 0.5, 8, 1e-3);
    for (const Complex& a : p.points) {
      probes.push_back(a + Complex{gm.well_radius * 0.5, 0.0});
      radii.push_back(gm.well_radius * 0.1);
    }
    auto uval = [&](Complex z) { return run.weight.value(z); };
    subharm::SubmeanReport rep = subharm::check_submean(uval, probes, radii);
    certs.push_back(
        cert_linear("weight_submean", rep.worst_gap, 1e-8,
                    "value minus circle mean at " + std::to_string(rep.tested) + " probes"));
  }
  for (std::size_t n = 0; n < p.points.size(); ++n) {
    subharm::DropCert dc = subharm::certify_well_drop(run.weight, n, std::exp(-2.0));
    CertRow row = cert_linear("well_drop_" + std::to_string(n), dc.measured, dc.bound,
                              "guaranteed log drop at delta = e^-2");
    certs.push_back(row);
  }

  // the correction problem
  int ca = adaptive_cells_across(run.chi, cfg.cells_across, cfg.max_cells);
  dbar::DbarProblem prob{run.h_fn, run.chi, run.weight, dbar::make_band_grid(run.chi, ca)};
  run.integral = dbar::hormander_integral(prob, cfg.threads);
  certs.push_back(cert_linear("integral_refinement", run.integral.rel_refinement, 0.05,
                              "coarse vs fine band quadrature"));

  // invert D from the measured integral: log I = log(s eta / 100) + log E1 + log E2 / kappa
  {
    double log_e2 = error_budget(p, 1.0).log_e2;
    double log_e1_needed = run.integral.log_i - std::log(p.s * p.eta / 100.0) - log_e2 / p.kappa;
    double log_d = log_e1_needed - (std::log(p.tau) - 1.5 * std::log(p.eta) - 0.5 * std::log(p.kappa));
    run.d_e1 = sexp(log_d);
    ErrorBudget at_d = error_budget(p, std::max(run.d_e1, 1e-300));
    double log_rhs = std::log(p.s * p.eta / 100.0) + at_d.log_e1 + at_d.log_e2 / p.kappa;
    certs.push_back(cert_log("integral_budget", run.integral.log_i, log_rhs,
                             "budget constant d_e1 = " + std::to_string(run.d_e1)));
    ErrorBudget paper = error_budget(p, 400.0);
    double log_rhs_paper = std::log(p.s * p.eta / 100.0) + paper.log_e1 + paper.log_e2 / p.kappa;
    certs.push_back(cert_log("integral_budget_fixed_d", run.integral.log_i, log_rhs_paper,
                             "at the d = 400 constant the proof carries"));
  }

  // quadrature cross-check: the Cauchy transform of the sampled source should
  // reproduce chi h + A wherever the integral resolves it
  if (cfg.quadrature_check) {
    ComplexGrid src = dbar::sample_source(prob, cfg.threads);
    dbar::DbarSolution sol = dbar::solve_dbar_cauchy(src, run.integral.log_i);
    run.quad_residual = dbar::measure_residual(sol, src);
    certs.push_back(cert_linear("quadrature_residual", run.quad_residual->band_rel_avg, 0.1,
                                "finite-difference dbar vs source on the band"));
    double defect = 0.0, scale = p.tau + 2.0 * A;
    auto probe = [&](Complex z) {
      Complex model = run.chi.chi(z) == 0.0 ? Complex{0, 0} : run.chi.chi(z) * run.h_fn(z);
      defect = std::max(defect, std::abs(sol.beta(z) - (model + A)));
    };
    for (int i = 0; i < 16; ++i) {
      double t = kTwoPi * double(i) / 16.0;
      Complex e{std::cos(t), std::sin(t)};
      probe(0.5 * e);
      probe(1.0 * e);
      probe((1.0 + p.eta) * e);
      probe(gm.glue_outer * e);
    }
    run.telescope_defect = defect / scale;
    certs.push_back(cert_linear("telescope_defect", run.telescope_defect, 0.05,
                                "quadrature beta vs chi h + A, relative"));
  }

  // polynomial gauge fit: P approximates chi h + A with design weights
  {
    auto target = [&](Complex z) -> Complex {
      double c = run.chi.chi(z);
      return (c == 0.0 ? Complex{0, 0} : c * run.h_fn(z)) + A;
    };
    const FitZones& zn = cfg.zones;
    SampleSet ss;
    ss.point(target, Complex{0, 0}, zn.core_log_boost);
    for (int i = 1; i <= zn.core_rings; ++i) {
      double r = gm.chi_one_inner * 0.995 * double(i) / double(zn.core_rings);
      ss.ring(target, Complex{0, 0}, r, zn.angles, zn.core_log_boost, 0.31 * double(i));
    }
    for (double t : {0.25, 0.5, 0.75}) {
      double rin = gm.chi_one_inner + (gm.chi_zero_inner - gm.chi_one_inner) * t;
      double rout = gm.chi_zero_outer + (gm.chi_one_outer - gm.chi_zero_outer) * t;
      ss.ring(target, Complex{0, 0}, rin, zn.angles, -zn.collar_log_drop, 0.11);
      ss.ring(target, Complex{0, 0}, rout, zn.angles, -zn.collar_log_drop, 0.29);
    }
    for (double t : {0.3, 0.5, 0.7}) {
      double r = gm.chi_zero_inner + (gm.chi_zero_outer - gm.chi_zero_inner) * t;
      ss.ring(target, Complex{0, 0}, r, zn.angles, -zn.plateau_log_drop, 0.17);
    }
    for (double t : {0.25, 0.55, 0.85}) {
      double r = gm.chi_one_outer + (1.0 + p.eta - gm.well_radius - gm.chi_one_outer) * t;
      ss.ring(target, Complex{0, 0}, r, zn.angles, -zn.gap_log_drop, 0.41 * t);
    }
    ss.ring(target, Complex{0, 0}, 1.0 + p.eta, zn.angles, -zn.gap_log_drop, 0.5);
    ss.ring(target, Complex{0, 0}, gm.glue_inner, zn.angles / 2, -zn.gap_log_drop - 2.0, 0.23);
    ss.ring(target, Complex{0, 0}, gm.glue_outer, zn.angles / 2, -zn.gap_log_drop - 2.0, 0.77);
    double pin_ring = (p.s * p.eta / 10.0) * std::exp(-2.0);
    for (const Complex& a : p.points) {
      ss.point(target, a, zn.pin_log_boost);
      ss.ring(target, a, pin_ring, 8, zn.pin_log_boost - 4.0);
      ss.ring(target, a, 2.0 * pin_ring, 8, zn.pin_log_boost - 5.0);
      ss.ring(target, a, gm.well_radius * 0.6, 12, -zn.gap_log_drop);
    }
    run.gauge = dbar::fit_poly_gauge(ss.samples, cfg.fit_degree);
    run.fit_residual = run.gauge.residual();
    certs.push_back(cert_linear("fit_residual", run.fit_residual, 0.05 * (p.tau + A),
                                "weighted rms of the gauge fit"));
  }

  auto g_abs = [&](Complex z) { return std::abs(run.g(z)); };

  // weighted mass of the fitted witness against I^2. The band weight is
  // e^{e^{1/eta}}, so I^2 sits ~60 orders below the double-precision fit
  // floor; this row stays red at desk scale and records the gap honestly.
  {
    auto beta_fn = [&](Complex z) { return run.beta(z); };
    dbar::InequalityReport iq = dbar::hormander_inequality(
        beta_fn, run.weight, run.integral.log_i, gm.glue_outer + 1.0);
    certs.push_back(cert_linear("witness_mass_vs_budget", iq.lhs, iq.rhs,
                                "true minimal witness is below the double-precision floor"));
  }

  // well image: |g + A| on rings of radius (1/10) delta s eta about each
  // well, against E1 E2 delta^{(1/d) e^{1/eta} - 1}; d_l1 = least passing d
  {
    auto p_abs = [&](Complex z) { return std::abs(run.g(z) + A); };
    double ex = std::exp(1.0 / p.eta);
    std::vector<double> measured(cfg.deltas.size(), 0.0);
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
      double rr = cfg.deltas[di] * p.s * p.eta / 10.0;
      for (const Complex& a : p.points) {
        measured[di] = std::max(measured[di], max_on_ring(p_abs, a, rr, 32));
        measured[di] = std::max(measured[di], std::abs(run.g(a) + A));
      }
    }
    auto log_rhs_at = [&](double d, double delta) {
      ErrorBudget b = error_budget(p, d);
      return b.log_e1 + b.log_e2 + (ex / d - 1.0) * std::log(delta);
    };
    auto passes = [&](double d) {
      for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
        if (slog(measured[di]) > log_rhs_at(d, cfg.deltas[di])) return false;
      return true;
    };
    double lo = 1.0, hi = 1.0;
    while (hi < 1e9 && !passes(hi)) hi *= 2.0;
    if (passes(hi)) {
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
      }
      run.d_l1 = hi;
    } else {
      run.d_l1 = kInf;
    }
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
      certs.push_back(cert_log("well_image_" + fmt_tag(cfg.deltas[di]), slog(measured[di]),
                               std::isfinite(run.d_l1) ? log_rhs_at(run.d_l1, cfg.deltas[di])
                                                       : -kInf,
                               "at the least passing constant d_l1"));
      certs.push_back(cert_log("well_image_fixed_d_" + fmt_tag(cfg.deltas[di]),
                               slog(measured[di]), log_rhs_at(400.0, cfg.deltas[di]),
                               "at the d = 400 constant the proof carries"));
    }
  }

  // straightening: g vs phi_inv + tau on |z| <= 1 - kappa eta, and the
  // derivative against the fixed unit rotation
  {
    double sweep_r = 1.0 - p.kappa * p.eta;
    double sup_err = 0.0;
    for (int ri = 0; ri <= 10; ++ri) {
      double r = sweep_r * double(ri) / 10.0;
      sup_err = std::max(sup_err, max_on_ring(
                                      [&](Complex z) {
                                        return std::abs(run.g(z) - (m.phi_inv(z) + p.tau));
                                      },
                                      Complex{0, 0}, r, ri == 0 ? 1 : 128));
    }
    ErrorBudget b = error_budget(p, std::max(run.d_e1, 1.0));
    double log_rhs = b.log_e1 - std::log(p.kappa) + b.log_e2 / 40.0;
    certs.push_back(cert_log("straighten_sup", slog(sup_err), log_rhs,
                             "d taken as max(d_e1, 1)"));

    Complex rot = m.phi_prime0 / std::abs(m.phi_prime0);
    double sup_d = 0.0;
    double cr = p.kappa * p.eta / 4.0;
    auto lin = [rot](Complex z) { return rot * z; };
    auto g_fn = [&](Complex z) { return run.g(z); };
    for (int ri = 0; ri <= 6; ++ri) {
      double r = sweep_r * double(ri) / 6.0;
      int na = ri == 0 ? 1 : 48;
      for (int i = 0; i < na; ++i) {
        double t = kTwoPi * double(i) / double(na);
        Complex z = r * Complex{std::cos(t), std::sin(t)};
        dbar::DerivativeReport dr = dbar::derivative_bound(g_fn, lin, z, cr);
        sup_d = std::max(sup_d, dr.measured);
      }
    }
    double log_rhs_d = logsum(b.log_e1 - std::log(p.kappa * p.kappa * p.eta) + b.log_e2 / 40.0,
                              slog((12.0 / (p.kappa * p.eta)) * p.eps * std::log(1.0 / p.eps)));
    certs.push_back(cert_log("straighten_deriv", slog(sup_d), log_rhs_d,
                             "Cauchy derivative at radius kappa eta / 4"));
  }

  // radial growth: M_g(R) <= tau + R^{(d/eta) e^{1/eta}}
  {
    double ex = std::exp(1.0 / p.eta);
    double d_need = 0.0;
    std::vector<double> ms(cfg.growth_radii.size());
    for (std::size_t i = 0; i < cfg.growth_radii.size(); ++i) {
      double rr = cfg.growth_radii[i];
      require(rr >= 3.0, "growth radii start at 3");
      ms[i] = max_on_ring(g_abs, Complex{0, 0}, rr, 256);
      double excess = std::max(ms[i] - p.tau, 2.0);
      d_need = std::max(d_need, p.eta / ex * std::log(excess) / std::log(rr));
    }
    run.d_l3 = std::max(1.0, d_need);
    for (std::size_t i = 0; i < cfg.growth_radii.size(); ++i) {
      double rr = cfg.growth_radii[i];
      double log_rhs = logsum(std::log(p.tau), (run.d_l3 / p.eta) * ex * std::log(rr));
      certs.push_back(cert_log("radial_growth_r" + std::to_string(int(rr)), slog(ms[i]), log_rhs,
                               "d_l3 = " + std::to_string(run.d_l3)));
    }
  }

  return run;
}

}  // namespace wander::construct
