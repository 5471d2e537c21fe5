// Runs the ten acceptance checks and prints one PASS/FAIL line per check.
// Usage: cvsheet_acceptance [n ...]   (no arguments: all)

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cvs/diagnostics.hpp"
#include "cvs/hyperbolic.hpp"
#include "cvs/interface.hpp"
#include "cvs/picard.hpp"
#include "cvs/scenario.hpp"
#include "cvs/stability.hpp"

using namespace cvs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig sheet_preset() {
  RunConfig c = preset("perturbed-sheet");
  c.output.write = false;
  return c;
}

Outcome hyperbolicity() {
  auto t0 = std::chrono::steady_clock::now();
  HyperbolicSurvey s2 = survey_boundary_states(1000, 2024, 2);
  HyperbolicSurvey s3 = survey_boundary_states(1000, 2025, 3);
  const double t = seconds_since(t0);
  const bool ok = s2.pass() && s3.pass() && s2.samples >= 1000 && s3.samples >= 1000 && t < 10.0;
  return {ok, fmt("d=2,3 x %d states: asym %.1e/%.1e, min eig A0 %.3f/%.3f, rank fails %d/%d, inertia fails %d/%d, "
                  "canonical defect %.1e/%.1e, %.2fs",
                  s2.samples, s2.max_asymmetry, s3.max_asymmetry, s2.min_eig_a0, s3.min_eig_a0, s2.rank_failures,
                  s3.rank_failures, s2.inertia_failures, s3.inertia_failures, s2.max_canonical_defect,
                  s3.max_canonical_defect, t)};
}

// shared by checks 2 and 3
RunSummary& reference_run() {
  static RunSummary s = run_scenario(sheet_preset());
  return s;
}

Outcome conservation() {
  auto t0 = std::chrono::steady_clock::now();
  const RunSummary& a = reference_run();
  RunConfig c = sheet_preset();
  c.scenario.steps = 2 * a.steps;
  const RunSummary b = run_scenario(c);
  const double t = seconds_since(t0);
  const double ratio = std::abs(a.rel_drift) / std::abs(b.rel_drift);
  const bool ok = a.exit_code == 0 && b.exit_code == 0 && std::abs(a.rel_drift) <= 1e-6 && ratio >= 8.0 && t < 120.0;
  return {ok, fmt("%d steps drift %.2e, %d steps drift %.2e, ratio %.1f, %.1fs", a.steps, a.rel_drift, b.steps,
                  b.rel_drift, ratio, t)};
}

Outcome constraints() {
  const RunSummary& a = reference_run();
  const bool ok = a.exit_code == 0 && a.max_div_b <= 1e-8 && a.max_bn <= 1e-8;
  return {ok, fmt("max rel div b %.2e, max rel b.N %.2e over %d steps", a.max_div_b, a.max_bn, a.steps)};
}

Outcome recovery() {
  const int n = 64;
  auto sp = Spectral::get(n, 1);
  Field psi(n);
  for (int i = 0; i < n; ++i) psi[i] = 0.1 * std::sin(2.0 * 2.0 * std::numbers::pi * i / n);
  bool ok = true;
  std::string d;
  for (double kappa : {0.0, 1e-2}) {
    PhysicsConfig ph;
    ph.sigma = 1.0;
    ph.kappa = kappa;
    InterfaceField f{psi, Field(n, 0.0)};
    RecoveryResult r = recover_interface(*sp, kappa_jump_target(*sp, f, ph), f.psi_t, ph, Field(n, 0.0));
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(r.psi[i] - psi[i]));
    ok = ok && err <= 1e-8 && r.iterations <= 200;
    d += fmt("kappa=%g: err %.1e in %d its; ", kappa, err, r.iterations);
  }
  return {ok, d};
}

Outcome identities() {
  auto t0 = std::chrono::steady_clock::now();
  BatteryReport r = identity_battery(BatteryOptions{});
  const double t = seconds_since(t0);
  std::string d;
  for (const auto& l : r.lines) d += fmt("%s %.2f; ", l.name.c_str(), l.slope);
  return {r.pass && r.lines.size() == 4 && t < 60.0, d + fmt("order 4, %.2fs", t)};
}

Outcome picard() {
  RunConfig c = sheet_preset();
  c.phys.kappa = 1e-2;
  Prepared p = prepare(c);
  PicardOptions po;
  po.T = c.scenario.T;
  PicardState st = picard_start(p.ctx, p.state, po);
  for (int k = 0; k < 7; ++k) picard_iterate(p.ctx, st, p.state);
  const auto& dn = st.diff_norm;  // dn[m-1] = diff_norm(m)
  bool ok = dn.size() == 7;
  std::string d = "diff_norm(1..7):";
  for (double x : dn) d += fmt(" %.2e", x);
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) worst = std::max(worst, dn[n] / dn[n - 1]);
  ok = ok && worst <= 0.5 && dn[5] <= 1e-3 * dn[0];
  return {ok, d + fmt("; max ratio n=2..6 %.3f, diff(6)/diff(1) %.1e", worst, dn[5] / dn[0])};
}

Outcome mach_limit() {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig c = sheet_preset();
  c.scenario.T = 0.5;
  auto rows = sweep_mach(c, {1.0, 0.3, 0.1, 0.03});
  const double t = seconds_since(t0);
  bool ok = t < 600.0;
  std::string d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i].summary.exit_code == 0;
    if (i > 0) ok = ok && rows[i].summary.div_v_l2 < rows[i - 1].summary.div_v_l2;
    if (i > 1) ok = ok && rows[i].diff_prev < rows[i - 1].diff_prev;
    d += fmt("eps=%g div v %.3e", rows[i].value, rows[i].summary.div_v_l2);
    if (i > 0) d += fmt(" diff %.3e", rows[i].diff_prev);
    d += "; ";
  }
  return {ok, d + fmt("T=0.5, %.1fs", t)};
}

Outcome kappa_limit() {
  RunConfig c = sheet_preset();
  const std::vector<double> ks{1e-2, 1e-3, 1e-4};
  auto rows = sweep_kappa(c, ks);
  bool ok = rows.size() == 3;
  std::vector<double> lx, ly;
  std::string d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i].summary.exit_code == 0;
    lx.push_back(std::log(ks[i]));
    ly.push_back(std::log(rows[i].data_diff));
    d += fmt("kappa=%g data diff %.3e", ks[i], rows[i].data_diff);
    if (i > 0) d += fmt(" diff %.3e", rows[i].diff_prev);
    d += "; ";
  }
  ok = ok && rows[2].diff_prev < rows[1].diff_prev;
  const double slope = fit_slope(lx, ly);
  ok = ok && slope >= 0.8;
  return {ok, d + fmt("data slope %.3f", slope)};
}

Outcome stability_algebra() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.2, 3.0);
  auto vec = [&] { return Vec3{U(rng), U(rng), 0.0}; };
  int holds2 = 0, counter = 0, general_holds2 = 0, general_counter = 0;
  for (int k = 0; k < 10000; ++k) {
    const Vec3 bp = vec(), bm = vec(), ju = vec();
    if (check_syrov2(1.0, 1.0, bp, bm, ju).holds()) {
      ++holds2;
      if (!check_syrovatskii(1.0, 1.0, bp, bm, ju).holds()) ++counter;
    }
    const double rp = R(rng), rm = R(rng);
    if (check_syrov2(rp, rm, bp, bm, ju).holds()) {
      ++general_holds2;
      if (!check_syrovatskii(rp, rm, bp, bm, ju).holds()) ++general_counter;
    }
  }
  // limit of the compressible condition on random traces
  EosParams eos;
  eos.eps = 1e-3;
  double gap = 0.0;
  int used = 0;
  for (int k = 0; k < 1000; ++k) {
    TraceState t;
    t.v = {vec(), vec()};
    t.b = {vec(), vec()};
    t.rho = {R(rng), R(rng)};
    // equal total pressure: S chosen so both sides sit at p = 0
    for (int s = 0; s < 2; ++s) t.S[s] = -eos.c_v * eos.gamma * std::log(t.rho[s]);
    StabilityReport r = check_trakhinin(t, eos);
    const double m2 = r.syrov2.margin();
    if (std::abs(m2) < 1e-2) continue;
    ++used;
    gap = std::max(gap, std::abs(r.trakhinin.margin() - m2) / std::abs(m2));
  }
  const bool ok = counter == 0 && holds2 > 0 && gap <= 1e-3;
  return {ok, fmt("unit densities: %d/10000 draws satisfy syrov2, %d counterexamples; eps=1e-3 max relative margin gap "
                  "%.1e over %d traces; random densities (logged only): %d of %d syrov2 draws violate syrov",
                  holds2, counter, gap, used, general_counter, general_holds2)};
}

Outcome kelvin_helmholtz() {
  GrowthOptions u;
  const GrowthResult a = growth_experiment(u);
  GrowthOptions s = u;
  const double thr = kh_sigma_threshold(u.mode, u.u, -u.u, 1.0, 1.0);
  s.sigma = 2.0 * thr;
  const GrowthResult b = growth_experiment(s);
  const double rel = std::abs(a.rate - a.oracle_rate) / a.oracle_rate;
  const bool unstable_ok = a.rate > 0.0 && rel <= 0.2;
  const bool stable_ok = b.rate <= std::max(b.fit_noise, 2.0 * b.rate_err);
  return {unstable_ok && stable_ok,
          fmt("sigma=0: rate %.4f +- %.4f vs oracle %.4f (rel %.3f); sigma=%.2f (threshold %.2f): rate %.3f +- %.3f, "
              "fit noise %.3f",
              a.rate, a.rate_err, a.oracle_rate, rel, s.sigma, thr, b.rate, b.rate_err, b.fit_noise)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"structural hyperbolicity", hyperbolicity}, {"energy conservation", conservation},
      {"constraint propagation", constraints},     {"interface recovery", recovery},
      {"identity battery", identities},            {"Picard contraction", picard},
      {"incompressible-limit trend", mach_limit},  {"kappa-removal trend", kappa_limit},
      {"stability algebra", stability_algebra},    {"Kelvin-Helmholtz suppression", kelvin_helmholtz}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %-30s %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", checks[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
