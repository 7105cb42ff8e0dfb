// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dqdwtd/dqd_oc_model.hpp"
#include "dqdwtd/errors.hpp"
#include "dqdwtd/liouvillian.hpp"
#include "dqdwtd/trajectory.hpp"
#include "dqdwtd/wtd_engine.hpp"

using namespace dqdwtd;

namespace {

constexpr auto kE = ChannelLabel::electron_out;
constexpr auto kG = ChannelLabel::photon_leak;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the largest deviation seen against one tolerance.
class Budget {
 public:
  explicit Budget(double tol) : tol_(tol) {}
  void add(double deviation) {
    if (!(deviation <= tol_)) ok_ = false;
    worst_ = std::isnan(deviation) ? INFINITY : std::max(worst_, deviation);
  }
  bool ok() const { return ok_; }
  double worst() const { return worst_; }
  std::string describe(const char* what) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s max %.3g (tol %.0e)", what, worst_, tol_);
    return buf;
  }

 private:
  double tol_;
  double worst_ = 0.0;
  bool ok_ = true;
};

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

const std::vector<double> kAlphaGrid = logspace(0.1, 10.0, 10);
const std::vector<double> kCoopGrid = logspace(0.1, 25.0, 10);

PhotonScenario scenario(double alpha, double c, int photons) {
  return photon_scenario(ModelParams::from_dimensionless(alpha, c, photons), photons);
}

struct TwoPhotonNumeric {
  double ee, eg, ge, gg;
  double e1() const { return ee + eg; }
  double e2() const { return ee + ge; }
  double sum() const { return ee + eg + ge + gg; }
};

TwoPhotonNumeric two_photon_numeric(double alpha, double c) {
  const PhotonScenario s = scenario(alpha, c, 2);
  const JumpProbabilityTable t = s.engine.two_jump_table(s.initial);
  return {t.at({kE, kE}), t.at({kE, kG}), t.at({kG, kE}), t.at({kG, kG})};
}

double pe_numeric(double alpha, double c) {
  const PhotonScenario s = scenario(alpha, c, 1);
  return s.engine.first_jump_probability(kE, s.initial);
}

double kt1_numeric(double alpha, double c) {
  const PhotonScenario s = scenario(alpha, c, 1);
  return s.engine.mean_first_jump_time(s.initial) * s.params.kappa;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

Outcome one_photon_probability() {
  Budget grid(1e-9), spot(1e-12);
  for (double a : kAlphaGrid)
    for (double c : kCoopGrid) grid.add(std::abs(pe_numeric(a, c) - closed_form_pe(a, c)));
  spot.add(std::abs(pe_numeric(1.0, 1.0) - 0.125));
  return {grid.ok() && spot.ok(), join({grid.describe("grid |p_e - closed|"), spot.describe("p_e(1,1) - 0.125")})};
}

Outcome mean_first_click_time() {
  Budget grid(1e-9), flat(1e-12), asym(1e-4);
  for (double a : kAlphaGrid)
    for (double c : kCoopGrid) grid.add(std::abs(kt1_numeric(a, c) - closed_form_mean_time(a, c)));
  for (double c : kCoopGrid) {
    flat.add(std::abs(kt1_numeric(1.0, c) - 1.0));
    flat.add(std::abs(closed_form_mean_time(1.0, c) - 1.0));
  }
  asym.add(std::abs(kt1_numeric(0.5, 1e6) - 10.0 / 9.0));
  asym.add(std::abs(closed_form_mean_time(0.5, 1e6) - 10.0 / 9.0));
  return {grid.ok() && flat.ok() && asym.ok(),
          join({grid.describe("grid"), flat.describe("alpha=1 vs 1"), asym.describe("alpha=0.5,C=1e6 vs 10/9")})};
}

Outcome two_photon_probabilities() {
  Budget grid(1e-9), norm(1e-9);
  for (double a : kAlphaGrid) {
    for (double c : kCoopGrid) {
      const TwoPhotonNumeric n = two_photon_numeric(a, c);
      const TwoPhotonClosedForm f = closed_form_two_photon(a, c);
      for (double d : {n.ee - f.p_ee, n.eg - f.p_egamma, n.ge - f.p_gammae, n.gg - f.p_gammagamma,
                       n.e1() - f.p_e1, n.e2() - f.p_e2})
        grid.add(std::abs(d));
      norm.add(std::abs(n.sum() - 1.0));
    }
  }
  return {grid.ok() && norm.ok(), join({grid.describe("grid, 6 quantities"), norm.describe("|sum - 1|")})};
}

Outcome hierarchy() {
  bool strict = true;
  double min_gap = INFINITY;
  for (double a : kAlphaGrid) {
    for (double c : kCoopGrid) {
      const TwoPhotonNumeric n = two_photon_numeric(a, c);
      const double pe = pe_numeric(a, c);
      const TwoPhotonClosedForm f = closed_form_two_photon(a, c);
      const double pe_cf = closed_form_pe(a, c);
      for (double gap : {n.e1() - n.ee, pe - n.e1(), n.e2() - pe, f.p_e1 - f.p_ee, pe_cf - f.p_e1, f.p_e2 - pe_cf}) {
        strict = strict && gap > 0.0;
        min_gap = std::min(min_gap, gap);
      }
    }
  }
  Budget vanishing(1e-5);
  for (double a : kAlphaGrid) {
    const double c = 1e-6;
    const TwoPhotonNumeric n = two_photon_numeric(a, c);
    const double pe = pe_numeric(a, c);
    for (double gap : {n.e1() - n.ee, pe - n.e1(), n.e2() - pe}) vanishing.add(std::abs(gap));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "strict on grid: %s (min gap %.3g)", strict ? "yes" : "no", min_gap);
  return {strict && vanishing.ok(), join({buf, vanishing.describe("gaps at C=1e-6")})};
}

Outcome asymptotics() {
  Budget ee(1e-4), cross(1e-4), large_c(1e-6);
  for (double c : {0.5, 1.0, 5.0}) {
    const double target = c * c / ((1 + c) * (1 + c));
    ee.add(std::abs(two_photon_numeric(1e6, c).ee - target));
    ee.add(std::abs(closed_form_two_photon(1e6, c).p_ee - target));
  }
  // alpha -> infinity: p_egamma, p_gammae -> C/(1+C)^2 = p_e p_gamma of one photon
  for (double c : {0.5, 1.0, 3.0, 5.0}) {
    const double pe = closed_form_pe(1e6, c);
    const double target = c / ((1 + c) * (1 + c));
    const TwoPhotonNumeric n = two_photon_numeric(1e6, c);
    const TwoPhotonClosedForm f = closed_form_two_photon(1e6, c);
    for (double v : {n.eg, n.ge, f.p_egamma, f.p_gammae}) {
      cross.add(std::abs(v - target));
      cross.add(std::abs(v - pe * (1.0 - pe)));
    }
  }
  for (double a : {0.5, 1.0, 2.0, 5.0}) {
    const double den = (1 + a) * (1 + a) * (6 + 5 * a + a * a);
    const TwoPhotonClosedForm f = closed_form_two_photon(a, 1e8);
    large_c.add(std::abs(f.p_ee - std::pow(a, 4) / den));
    large_c.add(std::abs(f.p_egamma - a * a * (1 + 2 * a) / den));
    large_c.add(std::abs(f.p_gammae - a * a * (9 + 5 * a) / den));
  }
  bool delta = true;
  double engine_delta = 0.0;
  for (double a : kAlphaGrid) {
    const TwoPhotonClosedForm f = closed_form_two_photon(a, 0.0);
    delta = delta && f.p_ee == 0.0 && f.p_egamma == 0.0 && f.p_gammae == 0.0 && f.p_gammagamma == 1.0;
    const TwoPhotonNumeric n = two_photon_numeric(a, 0.0);
    engine_delta = std::max({engine_delta, n.ee, n.eg, n.ge, std::abs(n.gg - 1.0)});
  }
  delta = delta && engine_delta <= 1e-12;
  char buf[96];
  std::snprintf(buf, sizeof buf, "C=0 delta limit exact: %s (engine %.3g)", delta ? "yes" : "no", engine_delta);
  return {ee.ok() && cross.ok() && large_c.ok() && delta,
          join({ee.describe("p_ee alpha=1e6"), cross.describe("p_egamma,p_gammae alpha=1e6"),
                large_c.describe("C=1e8 limits"), buf})};
}

Outcome efficiency() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> pos(0.1, 5.0), sgn(-3.0, 3.0);
  Budget identity(1e-12), proportional(1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    ModelParams p;
    p.g = pos(rng);
    p.gamma = pos(rng);
    p.kappa = pos(rng);
    p.epsilon = sgn(rng);
    p.t_c = pos(rng);
    identity.add(std::abs(efficiency_detuned(p) - efficiency_resonant(p.epsilon, p.t_c, p.cooperativity())));

    const double prefactor = 4.0 * p.epsilon / p.omega();
    const double c = p.cooperativity();
    const double eta = efficiency_resonant(p.epsilon, p.t_c, c);
    const double pe = closed_form_pe(1e8, c);
    proportional.add(std::abs(eta - prefactor * pe * (1.0 - pe)));
    proportional.add(std::abs(eta - prefactor * closed_form_two_photon(1e8, c).p_egamma));
  }
  return {identity.ok() && proportional.ok(),
          join({identity.describe("detuned(0,0) vs resonant, 20 sets"),
                proportional.describe("eta vs (4eps/Omega) p_e p_gamma at alpha=1e8")})};
}

double ks_exponential(std::vector<double> x, double rate) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 1.0 - std::exp(-rate * x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

Outcome monte_carlo() {
  const std::size_t n_traj = 100000;
  double worst_z = 0.0;
  std::string worst_what;
  auto compare = [&](double estimate, double se, double target, const std::string& what) {
    const double z = se > 0.0 ? std::abs(estimate - target) / se : (estimate == target ? 0.0 : INFINITY);
    if (z > worst_z) {
      worst_z = z;
      worst_what = what;
    }
  };
  std::size_t comparisons = 0;
  for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{5.0, 10.0}, std::pair{0.5, 2.0}}) {
    const ModelParams p = ModelParams::from_dimensionless(a, c, 1);
    char tag[48];
    std::snprintf(tag, sizeof tag, "(%g,%g)", a, c);

    const EnsembleStats one = run_ensemble(p, 1, n_traj, kSeed, 200.0);
    const ClosedFormTable cf = closed_form_table(a, c);
    compare(one.first_click_freq.at(kE).value, one.first_click_freq.at(kE).std_error, cf.p_e,
            std::string("p_e ") + tag);
    compare(one.first_click_freq.at(kG).value, one.first_click_freq.at(kG).std_error, cf.p_gamma,
            std::string("p_gamma ") + tag);
    compare(one.mean_first_click_time.value, one.mean_first_click_time.std_error, cf.kappa_t1,
            std::string("kappa t1 ") + tag);
    comparisons += 3;

    const EnsembleStats two = run_ensemble(p, 2, n_traj, kSeed + 1, 200.0);
    const TwoPhotonClosedForm f = cf.two_photon;
    const std::pair<std::pair<ChannelLabel, ChannelLabel>, double> seqs[] = {
        {{kE, kE}, f.p_ee}, {{kE, kG}, f.p_egamma}, {{kG, kE}, f.p_gammae}, {{kG, kG}, f.p_gammagamma}};
    for (const auto& [seq, target] : seqs) {
      const Estimate& est = two.sequence_freq.at(seq);
      compare(est.value, est.std_error, target,
              "p_" + std::string(short_name(seq.first)) + std::string(short_name(seq.second)) + " " + tag);
    }
    compare(two.first_click_freq.at(kE).value, two.first_click_freq.at(kE).std_error, f.p_e1,
            std::string("p_e1 ") + tag);
    compare(two.second_click_freq.at(kE).value, two.second_click_freq.at(kE).std_error, f.p_e2,
            std::string("p_e2 ") + tag);
    const PhotonScenario s2 = scenario(a, c, 2);
    compare(two.mean_first_click_time.value, two.mean_first_click_time.std_error,
            s2.engine.mean_first_jump_time(s2.initial), std::string("kappa t1(n=2) ") + tag);
    comparisons += 7;
  }

  const ModelParams bare = ModelParams::from_dimensionless(1.0, 0.0, 1);
  std::vector<double> times;
  times.reserve(n_traj);
  bool single_leak = true;
  run_ensemble(bare, 1, n_traj, kSeed + 2, 200.0, [&](std::size_t, const ClickRecord& r) {
    single_leak = single_leak && r.clicks.size() == 1 && r.clicks[0].label == kG;
    if (!r.clicks.empty()) times.push_back(r.clicks[0].time);
  });
  const double ks = ks_exponential(times, bare.kappa);
  const double ks_crit = 1.628 / std::sqrt(static_cast<double>(times.size()));

  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu comparisons, max |z| %.2f at %s (tol 3); g=0 KS D=%.3g (1%% crit %.3g)",
                comparisons, worst_z, worst_what.c_str(), ks, ks_crit);
  return {worst_z <= 3.0 && single_leak && ks < ks_crit, buf};
}

Outcome dyson_completeness() {
  Budget complete(1e-6), excess(1e-8);
  for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{5.0, 10.0}}) {
    for (int n : {1, 2}) {
      const PhotonScenario s = scenario(a, c, n);
      for (double t : {1.0, 5.0}) {
        const auto p = jump_number_decomposition(s.engine.split(), s.initial, t / s.params.kappa, n + 1);
        double sum = 0.0;
        for (int k = 0; k <= n; ++k) sum += p[k];
        complete.add(std::abs(sum - 1.0));
        excess.add(std::abs(p[n + 1]));
      }
    }
  }
  return {complete.ok() && excess.ok(),
          join({complete.describe("|sum_{k<=n} P_k - 1|"), excess.describe("|P_{n+1}|")})};
}

Outcome structural_invariants() {
  Budget left_null(1e-10), traceless(1e-12);
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal;
  for (int n : {0, 1, 2}) {
    for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{5.0, 10.0}, std::pair{0.5, 2.0}}) {
      ModelParams p = ModelParams::from_dimensionless(a, c, n);
      p.delta_d = 0.3;
      p.delta_r = -0.2;
      p.xi = 0.1;
      const DqdOcModel m = build_model(p);
      const Superoperator l = build_liouvillian(m.hamiltonian, m.channels);
      const Index d = m.hamiltonian.dim();
      const Eigen::RowVectorXcd left = vectorize(Operator::identity(d)).adjoint();
      left_null.add((left * l.matrix()).norm() / l.matrix().norm());
      for (const auto& ch : m.channels) {
        const Superoperator dis = dissipator(ch.op, ch.rate);
        traceless.add((left * dis.matrix()).norm() / std::max(1.0, dis.matrix().norm()));
      }
    }
  }
  bool dark_detected = false;
  try {
    const PhotonScenario s = scenario(1.0, 1.0, 0);
    (void)s.engine.first_jump_probability(kE, s.initial);
  } catch (const InconsistentSystemError&) {
    dark_detected = true;
  }
  bool round_trip = true;
  for (Index d : {1, 3, 6, 9}) {
    Matrix m(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    const Operator op(m);
    round_trip = round_trip && devectorize(vectorize(op)).matrix() == op.matrix();
  }
  return {left_null.ok() && traceless.ok() && dark_detected && round_trip,
          join({left_null.describe("left null residual"), traceless.describe("dissipator trace"),
                std::string("n=0 dark state raises: ") + (dark_detected ? "yes" : "no"),
                std::string("vec round trip exact: ") + (round_trip ? "yes" : "no")})};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 one-photon p_e", one_photon_probability},
      {"2 mean first-click time", mean_first_click_time},
      {"3 two-photon probabilities", two_photon_probabilities},
      {"4 detection hierarchy", hierarchy},
      {"5 asymptotic limits", asymptotics},
      {"6 quantum efficiency", efficiency},
      {"7 Monte Carlo oracle", monte_carlo},
      {"8 Dyson completeness", dyson_completeness},
      {"9 structural invariants", structural_invariants},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%s] %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
