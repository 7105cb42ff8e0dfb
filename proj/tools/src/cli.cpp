#include "dqdwtd_cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <CLI11.hpp>

#include "dqdwtd/dqd_oc_model.hpp"
#include "dqdwtd/errors.hpp"
#include "dqdwtd/trajectory.hpp"
#include "dqdwtd/wtd_engine.hpp"

namespace dqdwtd::cli {

namespace {

constexpr double kEngineTol = 1e-8;
constexpr double kZLimit = 5.0;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Model parameters shared by most commands. Dimensionless mode fixes kappa = 1,
// Gamma = alpha and g = sqrt(C alpha) / 2; times are then in units of 1/kappa.
struct ModelFlags {
  double alpha = 1.0;
  double coop = 1.0;
  int photons = 1;
  double delta_d = 0.0;
  double delta_r = 0.0;
  bool raw_units = false;
  double gamma = 1.0;
  double kappa = 1.0;
  double g = 0.5;

  ModelParams params(int n_max) const {
    ModelParams p;
    if (raw_units) {
      p.gamma = gamma;
      p.kappa = kappa;
      p.g = g;
      p.n_max = n_max;
    } else {
      if (!(alpha > 0.0)) throw UsageError("--alpha must be > 0");
      if (!(coop >= 0.0)) throw UsageError("--coop must be >= 0");
      p = ModelParams::from_dimensionless(alpha, coop, n_max);
    }
    p.delta_d = delta_d;
    p.delta_r = delta_r;
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

void add_rate_options(CLI::App& sub, ModelFlags& f) {
  sub.add_option("--alpha", f.alpha, "Gamma / kappa");
  sub.add_option("--coop,--cooperativity", f.coop, "cooperativity C = 4 g^2 / (Gamma kappa)");
  sub.add_flag("--raw-units", f.raw_units, "take --gamma, --kappa, --g instead of --alpha, --coop");
  sub.add_option("--gamma", f.gamma, "electron rate (raw units)");
  sub.add_option("--kappa", f.kappa, "photon loss rate (raw units)");
  sub.add_option("--g", f.g, "dot-cavity coupling (raw units)");
}

void add_model_options(CLI::App& sub, ModelFlags& f) {
  add_rate_options(sub, f);
  sub.add_option("--photons", f.photons, "initial photon number n");
  sub.add_option("--delta-d", f.delta_d, "dot detuning");
  sub.add_option("--delta-r", f.delta_r, "cavity detuning");
}

struct CommonFlags {
  std::string config;
  std::string output;
};

void add_common_options(CLI::App& sub, CommonFlags& c) {
  sub.add_option("--config", c.config, "key=value file; flags override it");
  sub.add_option("-o,--output", c.output, "write CSV here instead of stdout");
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* base = std::getenv(kOutputDirEnv); base && *base) p = std::filesystem::path(base) / p;
  }
  return p;
}

// Stdout or a file, chosen by --output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    const auto p = resolve_output(path);
    file_.open(p, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open output file " + p.string());
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void require_photons(int n, int lo, int hi) {
  if (n < lo || n > hi) {
    throw UsageError("--photons must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]" +
                     (n == 0 ? " (n = 0 never clicks: dark state)" : ""));
  }
}

std::vector<double> linear_grid(double from, double to, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? from : from + (to - from) * i / (count - 1);
  if (count > 1) v.back() = to;
  return v;
}

bool resonant(const ModelParams& p) { return p.delta_d == 0.0 && p.delta_r == 0.0; }

// ---------------------------------------------------------------------------

int cmd_probabilities(const ModelFlags& f, std::ostream& out, std::ostream& err) {
  require_photons(f.photons, 1, 2);
  const ModelParams p = f.params(f.photons);
  if (!resonant(p)) err << "warning: closed forms assume delta_d = delta_r = 0\n";
  const PhotonScenario s = photon_scenario(p, f.photons);
  const ClosedFormTable cf = closed_form_table(p.alpha(), p.cooperativity());
  const auto e = ChannelLabel::electron_out;
  const auto g = ChannelLabel::photon_leak;

  std::vector<std::tuple<std::string, double, double>> rows;
  if (f.photons == 1) {
    const JumpProbabilityTable t = s.engine.first_jump_table(s.initial);
    rows = {{"p_e", cf.p_e, t.at({e})},
            {"p_gamma", cf.p_gamma, t.at({g})},
            {"kappa_t1", cf.kappa_t1, p.kappa * s.engine.mean_first_jump_time(s.initial)}};
  } else {
    const JumpProbabilityTable t = s.engine.two_jump_table(s.initial);
    const TwoPhotonClosedForm& c = cf.two_photon;
    rows = {{"p_ee", c.p_ee, t.at({e, e})},
            {"p_egamma", c.p_egamma, t.at({e, g})},
            {"p_gammae", c.p_gammae, t.at({g, e})},
            {"p_gammagamma", c.p_gammagamma, t.at({g, g})},
            {"p_e1", c.p_e1, t.at({e, e}) + t.at({e, g})},
            {"p_e2", c.p_e2, t.at({e, e}) + t.at({g, e})}};
  }
  out << "quantity,closed_form,numeric,abs_diff\n";
  int status = kOk;
  for (const auto& [name, closed, numeric] : rows) {
    const double diff = std::abs(closed - numeric);
    out << name << ',' << fmt(closed) << ',' << fmt(numeric) << ',' << fmt(diff) << '\n';
    if (!(diff <= kEngineTol)) {
      err << "check failed: " << name << " differs from its closed form by " << fmt(diff) << '\n';
      status = kCheckFailed;
    }
  }
  return status;
}

struct SweepFlags {
  std::string axis = "C";
  double from = 0.0;
  double to = 10.0;
  int count = 11;
};

int cmd_sweep(const ModelFlags& f, const SweepFlags& s, std::ostream& out, std::ostream& err) {
  require_photons(f.photons, 1, 2);
  const bool alpha_axis = s.axis == "alpha";
  if (!alpha_axis && s.axis != "C" && s.axis != "cooperativity") {
    throw UsageError("--axis must be one of alpha, cooperativity, C");
  }
  if (s.count < 2) throw UsageError("--count must be >= 2");
  if (alpha_axis ? !(s.from > 0.0 && s.to > 0.0) : !(s.from >= 0.0 && s.to >= 0.0)) {
    throw UsageError(alpha_axis ? "alpha range must be > 0" : "cooperativity range must be >= 0");
  }
  const double kappa = f.raw_units ? f.kappa : 1.0;
  if (!(kappa > 0.0)) throw UsageError("--kappa must be > 0");

  out << (alpha_axis ? "alpha,C" : "C,alpha") << ",p_e,p_e1,p_e2,p_ee,kappa_t1,max_engine_diff\n";
  int status = kOk;
  for (double v : linear_grid(s.from, s.to, s.count)) {
    const double alpha = alpha_axis ? v : f.alpha;
    const double c = alpha_axis ? f.coop : v;
    const ClosedFormTable cf = closed_form_table(alpha, c);

    const PhotonScenario one = photon_scenario(ModelParams::from_dimensionless(alpha, c, 1, kappa), 1);
    double diff = std::abs(one.engine.first_jump_probability(ChannelLabel::electron_out, one.initial) - cf.p_e);
    diff = std::max(diff, std::abs(kappa * one.engine.mean_first_jump_time(one.initial) - cf.kappa_t1));
    if (f.photons == 2) {
      const PhotonScenario two = photon_scenario(ModelParams::from_dimensionless(alpha, c, 2, kappa), 2);
      const JumpProbabilityTable t = two.engine.two_jump_table(two.initial);
      const auto e = ChannelLabel::electron_out;
      const auto g = ChannelLabel::photon_leak;
      diff = std::max({diff, std::abs(t.at({e, e}) - cf.two_photon.p_ee),
                       std::abs(t.at({e, e}) + t.at({e, g}) - cf.two_photon.p_e1),
                       std::abs(t.at({e, e}) + t.at({g, e}) - cf.two_photon.p_e2)});
    }
    out << fmt(v) << ',' << fmt(alpha_axis ? c : alpha) << ',' << fmt(cf.p_e) << ',' << fmt(cf.two_photon.p_e1)
        << ',' << fmt(cf.two_photon.p_e2) << ',' << fmt(cf.two_photon.p_ee) << ',' << fmt(cf.kappa_t1) << ','
        << fmt(diff) << '\n';
    if (!(diff <= kEngineTol)) {
      err << "check failed at " << s.axis << "=" << fmt(v) << ": engine differs by " << fmt(diff) << '\n';
      status = kCheckFailed;
    }
  }
  return status;
}

struct CurveFlags {
  double t_max = 10.0;
  int points = 201;
};

int cmd_wtd_curve(const ModelFlags& f, const CurveFlags& c, std::ostream& out) {
  require_photons(f.photons, 1, 8);
  if (!(c.t_max > 0.0)) throw UsageError("--t-max must be > 0");
  if (c.points < 2) throw UsageError("--points must be >= 2");
  const PhotonScenario s = photon_scenario(f.params(f.photons), f.photons);
  const MonitoredSplit& split = s.engine.split();
  out << "t,W_e,W_gamma,W_total,survival\n";
  for (double t : linear_grid(0.0, c.t_max, c.points)) {
    const double we = wtd_time_density(split.no_jump, split.jumps.at(ChannelLabel::electron_out), s.initial, t);
    const double wg = wtd_time_density(split.no_jump, split.jumps.at(ChannelLabel::photon_leak), s.initial, t);
    const double total = first_jump_time_density(split, s.initial, t);
    const double surv = survival_probability(split.no_jump, s.initial, t);
    out << fmt(t) << ',' << fmt(we) << ',' << fmt(wg) << ',' << fmt(total) << ',' << fmt(surv) << '\n';
  }
  return kOk;
}

struct TrajFlags {
  std::size_t n_traj = 10000;
  std::uint64_t seed = 0;
  double t_max = 200.0;
  std::string dump;
};

int cmd_trajectories(const ModelFlags& f, TrajFlags t, bool seed_given, std::ostream& out, std::ostream& err) {
  require_photons(f.photons, 1, 2);
  if (t.n_traj < 1) throw UsageError("--n must be >= 1");
  if (!(t.t_max > 0.0)) throw UsageError("--t-max must be > 0");
  if (t.n_traj < 100) err << "warning: --n " << t.n_traj << " < 100; standard errors are unreliable\n";
  if (!seed_given) {
    std::random_device rd;
    t.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed " << t.seed << " (pass --seed to reproduce)\n";
  }
  const ModelParams p = f.params(f.photons);

  std::ofstream dump;
  if (!t.dump.empty()) {
    const auto path = resolve_output(t.dump);
    dump.open(path, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot open dump file " + path.string());
    dump << "traj_id,channel,time\n";
  }
  TrajectoryObserver observer;
  if (dump.is_open()) {
    observer = [&](std::size_t i, const ClickRecord& r) {
      for (const Click& c : r.clicks) dump << i << ',' << to_string(c.label) << ',' << fmt(c.time) << '\n';
    };
  }
  const EnsembleStats stats = run_ensemble(p, f.photons, t.n_traj, t.seed, t.t_max, observer);

  // Targets: closed forms at resonance, the deterministic engine otherwise.
  const PhotonScenario s = photon_scenario(p, f.photons);
  const auto e = ChannelLabel::electron_out;
  const auto g = ChannelLabel::photon_leak;
  const bool use_closed = resonant(p);
  const ClosedFormTable cf = closed_form_table(p.alpha(), p.cooperativity());
  const double kt1_target = p.kappa * s.engine.mean_first_jump_time(s.initial);

  struct Row {
    std::string name;
    Estimate est;
    double target;
  };
  std::vector<Row> rows;
  const Estimate kt1{p.kappa * stats.mean_first_click_time.value, p.kappa * stats.mean_first_click_time.std_error};
  if (f.photons == 1) {
    const JumpProbabilityTable tab = s.engine.first_jump_table(s.initial);
    rows = {{"p_e", stats.first_click_freq.at(e), use_closed ? cf.p_e : tab.at({e})},
            {"p_gamma", stats.first_click_freq.at(g), use_closed ? cf.p_gamma : tab.at({g})},
            {"kappa_t1", kt1, use_closed ? cf.kappa_t1 : kt1_target}};
  } else {
    const JumpProbabilityTable tab = s.engine.two_jump_table(s.initial);
    const TwoPhotonClosedForm& c = cf.two_photon;
    rows = {{"p_ee", stats.sequence_freq.at({e, e}), use_closed ? c.p_ee : tab.at({e, e})},
            {"p_egamma", stats.sequence_freq.at({e, g}), use_closed ? c.p_egamma : tab.at({e, g})},
            {"p_gammae", stats.sequence_freq.at({g, e}), use_closed ? c.p_gammae : tab.at({g, e})},
            {"p_gammagamma", stats.sequence_freq.at({g, g}), use_closed ? c.p_gammagamma : tab.at({g, g})},
            {"p_e1", stats.first_click_freq.at(e), use_closed ? c.p_e1 : tab.at({e, e}) + tab.at({e, g})},
            {"p_e2", stats.second_click_freq.at(e), use_closed ? c.p_e2 : tab.at({e, e}) + tab.at({g, e})},
            {"kappa_t1", kt1, kt1_target}};
  }

  out << "quantity,estimate,std_error,target,z\n";
  int status = kOk;
  for (const Row& r : rows) {
    const double dev = r.est.value - r.target;
    // A frequency stuck at 0 or 1 has zero sample error; use the binomial error of the target instead.
    double se = r.est.std_error;
    if (se == 0.0 && r.name != "kappa_t1") se = std::sqrt(r.target * (1.0 - r.target) / stats.n_traj);
    double z = std::numeric_limits<double>::quiet_NaN();
    if (se > 0.0) {
      z = dev / se;
    } else if (r.name != "kappa_t1" || std::abs(dev) <= 1e-12) {
      z = std::abs(dev) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      err << "warning: " << r.name << " has no standard error at n = " << stats.n_traj << "; z undefined\n";
    }
    out << r.name << ',' << fmt(r.est.value) << ',' << fmt(r.est.std_error) << ',' << fmt(r.target) << ','
        << fmt(z) << '\n';
    if (std::abs(z) > kZLimit) {
      err << "check failed: " << r.name << " is " << fmt(z) << " standard errors from its target\n";
      status = kCheckFailed;
    }
  }
  err << "n_traj " << stats.n_traj << ", seed " << stats.seed << ", non-terminated fraction "
      << fmt(static_cast<double>(stats.non_terminated) / static_cast<double>(stats.n_traj)) << " (t_max "
      << fmt(t.t_max) << ")\n";
  return status;
}

struct EfficiencyFlags {
  double epsilon = 1.0;
  double t_c = 1.0;
  double dd_from = 0.0, dd_to = 0.0;
  int dd_count = 1;
  double dr_from = 0.0, dr_to = 0.0;
  int dr_count = 1;
};

int cmd_efficiency(const ModelFlags& f, const EfficiencyFlags& e, std::ostream& out, std::ostream& err) {
  if (e.dd_count < 1 || e.dr_count < 1) throw UsageError("grid counts must be >= 1");
  ModelParams p = f.params(1);
  p.epsilon = e.epsilon;
  p.t_c = e.t_c;
  if (p.omega() == 0.0) throw UsageError("--epsilon and --tc cannot both be 0");
  out << "delta_d,delta_r,eta\n";
  int status = kOk;
  for (double dd : linear_grid(e.dd_from, e.dd_to, e.dd_count)) {
    for (double dr : linear_grid(e.dr_from, e.dr_to, e.dr_count)) {
      p.delta_d = dd;
      p.delta_r = dr;
      const double eta = efficiency_detuned(p);
      out << fmt(dd) << ',' << fmt(dr) << ',' << fmt(eta) << '\n';
      if (dd == 0.0 && dr == 0.0) {
        const double ref = efficiency_resonant(p.epsilon, p.t_c, p.cooperativity());
        if (!(std::abs(eta - ref) <= 1e-12 * std::max(1.0, std::abs(ref)))) {
          err << "check failed: resonant efficiency " << fmt(eta) << " vs " << fmt(ref) << '\n';
          status = kCheckFailed;
        }
      }
    }
  }
  return status;
}

struct DysonFlags {
  double t_max = 5.0;
  int points = 11;
  int max_jumps = -1;
  int nodes = 64;
};

int cmd_dyson(const ModelFlags& f, const DysonFlags& d, std::ostream& out, std::ostream& err) {
  require_photons(f.photons, 1, 4);
  if (!(d.t_max >= 0.0)) throw UsageError("--t-max must be >= 0");
  if (d.points < 1) throw UsageError("--points must be >= 1");
  if (d.nodes < 1) throw UsageError("--nodes must be >= 1");
  const int k_max = d.max_jumps < 0 ? f.photons + 1 : d.max_jumps;
  const PhotonScenario s = photon_scenario(f.params(f.photons), f.photons);
  DysonOptions options;
  options.nodes = d.nodes;

  out << 't';
  for (int k = 0; k <= k_max; ++k) out << ",P" << k;
  out << '\n';
  int status = kOk;
  for (double t : linear_grid(0.0, d.t_max, d.points)) {
    const std::vector<double> p = jump_number_decomposition(s.engine.split(), s.initial, t, k_max, options);
    out << fmt(t);
    for (double v : p) out << ',' << fmt(v);
    out << '\n';
    if (k_max >= f.photons) {
      double sum = 0.0;
      for (int k = 0; k <= f.photons; ++k) sum += p[k];
      double excess = 0.0;
      for (int k = f.photons + 1; k <= k_max; ++k) excess = std::max(excess, std::abs(p[k]));
      if (!(std::abs(sum - 1.0) <= 1e-6) || !(excess <= 1e-8)) {
        err << "check failed at t=" << fmt(t) << ": sum P_k (k<=n) = " << fmt(sum) << ", max |P_k| (k>n) = "
            << fmt(excess) << '\n';
        status = kCheckFailed;
      }
    }
  }
  return status;
}

// Config entries fill options that were not given on the command line.
void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> entries;
  try {
    entries = parse_config(in);
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  for (const auto& [key, value] : entries) {
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (!opt) throw UsageError(path + ": unknown key '" + key + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(path + ": bad value for '" + key + "': " + e.what());
    }
  }
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw std::runtime_error("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Waiting-time statistics of a double-dot / cavity photodetector"};
  app.name(args.empty() ? "dqdwtd" : std::filesystem::path(args[0]).filename().string());
  app.require_subcommand(1);

  ModelFlags model;
  CommonFlags common;
  SweepFlags sweep;
  CurveFlags curve;
  TrajFlags traj;
  EfficiencyFlags eff;
  DysonFlags dys;

  auto* probs = app.add_subcommand("probabilities", "closed-form vs engine click probabilities");
  add_model_options(*probs, model);
  add_common_options(*probs, common);

  auto* sw = app.add_subcommand("sweep", "closed forms on a grid in alpha or C, engine-checked");
  add_rate_options(*sw, model);
  sw->add_option("--photons", model.photons, "1: check one-photon quantities; 2: also two-photon");
  sw->add_option("--axis", sweep.axis, "alpha, cooperativity or C");
  sw->add_option("--from", sweep.from);
  sw->add_option("--to", sweep.to);
  sw->add_option("--count", sweep.count, "grid points, >= 2");
  add_common_options(*sw, common);

  auto* wc = app.add_subcommand("wtd-curve", "first-click time densities and survival");
  add_model_options(*wc, model);
  wc->add_option("--t-max", curve.t_max);
  wc->add_option("--points", curve.points);
  add_common_options(*wc, common);

  auto* tr = app.add_subcommand("trajectories", "quantum-jump ensemble vs targets");
  add_model_options(*tr, model);
  tr->add_option("--n", traj.n_traj, "number of trajectories");
  tr->add_option("--seed", traj.seed, "master seed");
  tr->add_option("--t-max", traj.t_max, "per-trajectory time limit");
  tr->add_option("--dump", traj.dump, "write traj_id,channel,time per click");
  add_common_options(*tr, common);

  auto* ef = app.add_subcommand("efficiency", "steady-state quantum efficiency over detunings");
  add_rate_options(*ef, model);
  ef->add_option("--epsilon", eff.epsilon, "dot energy offset");
  ef->add_option("--tc", eff.t_c, "interdot tunnelling");
  ef->add_option("--dd-from", eff.dd_from);
  ef->add_option("--dd-to", eff.dd_to);
  ef->add_option("--dd-count", eff.dd_count);
  ef->add_option("--dr-from", eff.dr_from);
  ef->add_option("--dr-to", eff.dr_to);
  ef->add_option("--dr-count", eff.dr_count);
  add_common_options(*ef, common);

  auto* dy = app.add_subcommand("dyson", "probabilities of exactly k clicks up to time t");
  add_model_options(*dy, model);
  dy->add_option("--t-max", dys.t_max);
  dy->add_option("--points", dys.points);
  dy->add_option("--max-jumps", dys.max_jumps, "largest k (default n + 1)");
  dy->add_option("--nodes", dys.nodes, "Gauss-Legendre nodes per layer");
  add_common_options(*dy, common);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("dqdwtd");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!common.config.empty()) apply_config(*sub, common.config);
    Sink sink(common.output, out);
    const std::string name = sub->get_name();
    if (name == "probabilities") return cmd_probabilities(model, *sink, err);
    if (name == "sweep") return cmd_sweep(model, sweep, *sink, err);
    if (name == "wtd-curve") return cmd_wtd_curve(model, curve, *sink);
    if (name == "trajectories") return cmd_trajectories(model, traj, sub->count("--seed") > 0, *sink, err);
    if (name == "efficiency") return cmd_efficiency(model, eff, *sink, err);
    return cmd_dyson(model, dys, *sink, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace dqdwtd::cli
