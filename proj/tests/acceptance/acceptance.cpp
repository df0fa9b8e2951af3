// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qcpto/errors.hpp"
#include "qcpto/exact.hpp"
#include "qcpto/heuristic.hpp"
#include "qcpto/latency.hpp"
#include "qcpto/metrics.hpp"
#include "qcpto/predict.hpp"
#include "qcpto/sim.hpp"
#include "qcpto_cli/commands.hpp"

using namespace qcpto;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

constexpr int kCorpus = 200;

Outcome oracle_equivalence() {
  int mismatches = 0;
  for (int k = 1; k <= kCorpus; ++k) {
    const QmkpInstance inst = oracle::random_instance(static_cast<std::uint64_t>(k));
    const Solution exact = solve_exact(inst);
    const Solution brute = solve_exhaustive(inst);
    const oracle::Best dfs = oracle::enumerate(inst);
    if (exact.objective != brute.objective || exact.objective != dfs.value) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(kCorpus) + " instances"};
}

Outcome heuristic_gap() {
  double sum = 0.0;
  double worst = 0.0;
  int runs = 0;
  for (int k = 1; k <= kCorpus; ++k) {
    const QmkpInstance inst = oracle::random_instance(static_cast<std::uint64_t>(k));
    const double opt = solve_exact(inst).objective;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      HeurConfig cfg;
      cfg.seed = seed;
      const double got = solve_heuristic(inst, cfg).objective;
      const double gap = opt > 0.0 ? (opt - got) / opt : 0.0;
      sum += gap;
      worst = std::max(worst, gap);
      ++runs;
    }
  }
  const double mean = sum / runs;
  return {mean <= 0.05 && worst <= 0.15, fmt("mean gap %.4f%%, max gap %.4f%%", 100 * mean, 100 * worst)};
}

Outcome runtime_scaling() {
  const QmkpInstance inst = make_snapshot_instance(40, 8, 1);
  auto t0 = std::chrono::steady_clock::now();
  const Solution heur = solve_heuristic(inst);
  const double heur_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  bool exhausted = false;
  double exact_obj = 0.0;
  try {
    exact_obj = solve_exact(inst).objective;
  } catch (const BudgetExceeded& e) {
    exhausted = true;
    exact_obj = e.best().objective;
  }
  const double exact_s = seconds_since(t0);
  const double ratio = heur_s / exact_s;
  return {ratio <= 0.20, fmt("heuristic %.4f s vs exact %.3f s, ratio %.5f", heur_s, exact_s, ratio) +
                             (exhausted ? " (exact hit its node budget)" : "") +
                             fmt(", objectives %.4f / %.4f", heur.objective, exact_obj)};
}

// Awareness must dominate in every run; intensity and satisfaction compare
// the means over the ten runs. Per-run intensity exceptions are reported.
Outcome metric_dominance() {
  constexpr double tol = 1e-12;
  constexpr int kRuns = 10;
  int awareness_bad = 0;
  std::vector<int> intensity_exceptions;
  double exact_int = 0.0, go_int = 0.0, exact_sat = 0.0, cpto_sat = 0.0;
  bool defined = true;
  for (std::uint64_t seed = 1; seed <= kRuns; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.scenario.num_vehicles = 40;
    const Trace trace = scenario_trace(cfg);
    const auto workers = make_workers(cfg.scenario.region, cfg.workers, seed);
    const RunReport exact = run_simulation(trace, workers, Scheme::Exact, cfg).report;
    const RunReport go = run_simulation(trace, workers, Scheme::Go, cfg).report;
    const RunReport cpto = run_simulation(trace, workers, Scheme::Cpto, cfg).report;
    if (exact.awareness.mean + tol < cpto.awareness.mean || exact.awareness.mean + tol < go.awareness.mean) {
      ++awareness_bad;
    }
    defined = defined && exact.intensity.epochs > 0 && go.intensity.epochs > 0;
    if (exact.intensity.mean > go.intensity.mean + tol) intensity_exceptions.push_back(static_cast<int>(seed));
    exact_int += exact.intensity.mean / kRuns;
    go_int += go.intensity.mean / kRuns;
    exact_sat += exact.satisfaction.mean / kRuns;
    cpto_sat += cpto.satisfaction.mean / kRuns;
  }
  const bool ok = awareness_bad == 0 && defined && exact_int <= go_int + tol && exact_sat + tol >= cpto_sat;
  std::string detail = std::to_string(awareness_bad) + " runs with lower awareness; mean intensity " +
                       fmt("%.3f (exact) vs %.3f (go); mean satisfaction %.3f", exact_int, go_int, exact_sat) +
                       fmt(" (exact) vs %.3f (cpto); per-run intensity exceptions:", cpto_sat);
  if (intensity_exceptions.empty()) detail += " none";
  for (int seed : intensity_exceptions) detail += " seed " + std::to_string(seed);
  return {ok, detail};
}

Outcome latency_arithmetic() {
  const double compute = compute_delay(2e8, 2e9, 4);
  const double transmit = transmit_delay(2e5, 1.5e7);
  const int cap = worker_capacity(0.4, 2e9, 2e8);
  const bool ok = std::abs(compute - 0.4) <= 1e-12 && std::abs(transmit - 0.0133333333333) <= 1e-9 && cap == 4;
  return {ok, fmt("compute %.12f s, transmit %.12f s, capacity %.0f", compute, transmit, cap)};
}

Outcome kalman() {
  Rng rng(6);
  double worst_track = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    PredictorConfig cfg;
    cfg.q_diag.setZero();
    cfg.r_diag.setZero();
    const Vec2 start{rng.uniform(-100, 100), rng.uniform(-100, 100)};
    const Vec2 vel{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    KfState s = make_filter(start, cfg);
    for (int t = 1; t <= 30; ++t) {
      const Vec2 truth = start + static_cast<double>(t) * vel;
      const KfPrediction p = kf_predict(s);
      s = kf_update(s, p.x_pred, p.p_pred, Eigen::Vector2d(truth.x, truth.y));
      if (t >= 3) worst_track = std::max(worst_track, norm(s.position() - truth));
    }
  }

  bool psd = true;
  PredictorConfig cfg;
  KfState s = make_filter({0, 0}, cfg);
  Eigen::Matrix4d g = Eigen::Matrix4d::Random();
  s.p_cov = g * g.transpose();
  for (int cycle = 0; cycle < 1000 && psd; ++cycle) {
    const KfPrediction p = kf_predict(s);
    s = kf_update(s, p.x_pred, p.p_pred, Eigen::Vector2d(rng.uniform(-50, 50), rng.uniform(-50, 50)));
    psd = well_formed(s);
  }

  double worst_gain = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double p = rng.uniform(0.01, 10.0);
    const double r = rng.uniform(0.01, 10.0);
    PredictorConfig c;
    c.r_diag = {r, r};
    const KfState base = make_filter({0, 0}, c);
    const Matrix4 p_pred = Vector4(p, p, 0.0, 0.0).asDiagonal();
    // A unit residual makes the state correction equal to the gain.
    const KfState out = kf_update(base, Vector4::Zero(), p_pred, Eigen::Vector2d(1.0, 0.0));
    worst_gain = std::max(worst_gain, std::abs(out.x_hat(0) - p / (p + r)));
  }
  const bool ok = worst_track <= 1e-9 && psd && worst_gain <= 1e-12;
  return {ok, fmt("tracking error %.3g m, gain error %.3g, ", worst_track, worst_gain) +
                  (psd ? "P stayed symmetric PSD" : "P lost symmetry or PSD")};
}

Outcome geometry_oracle() {
  GridSpec g;
  g.width = 50;
  g.height = 50;
  Rng rng(7);
  int raster_bad = 0, aware_bad = 0, share_bad = 0;
  for (int config = 0; config < 100; ++config) {
    std::vector<Triangle> roi_tris, fovs;
    std::vector<Roi> rois;
    for (int i = 0; i < 3; ++i) {
      Triangle t = oracle::random_triangle(rng, 0.0, 50.0);
      while (oracle::count(oracle::cells_of(t, g)) == 0) t = oracle::random_triangle(rng, 0.0, 50.0);
      roi_tris.push_back(t);
      Roi roi;
      roi.triangle = t;
      roi.turn = Turn::Left;
      rois.push_back(roi);
      fovs.push_back(oracle::random_triangle(rng, 0.0, 50.0));
    }
    for (const Triangle& t : fovs) {
      const auto want = oracle::cells_of(t, g);
      const OccupancyGrid got = rasterize_triangle(t, g);
      for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
          if (got.get(c, r) != want[static_cast<std::size_t>(r * g.width + c)]) ++raster_bad;
        }
      }
    }
    const std::vector<int> team{1, 2};
    if (detected_awareness(0, team, rois, fovs, g) != oracle::awareness(0, team, roi_tris, fovs, g)) ++aware_bad;
    const double want_share =
        oracle::gain(0, 1, roi_tris, fovs, g) + oracle::gain(1, 0, roi_tris, fovs, g);
    if (shared_interest(0, 1, rois, fovs, g) != want_share) ++share_bad;
  }
  return {raster_bad + aware_bad + share_bad == 0,
          fmt("cell mismatches %.0f, awareness mismatches %.0f, shared-interest mismatches %.0f", raster_bad,
              aware_bad, share_bad) + " over 100 configurations"};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Every regular file below dir, keyed by relative path.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), read_file(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qcpto");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "qcpto_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path sweep_cfg = root / "sweep.json";
  std::ofstream(sweep_cfg) << R"({"seed": 2, "scenario": {"num_vehicles": 15, "duration": 30},
    "sweep": {"experiment": "deadline", "grid": [0.4, 0.6], "seeds": [1, 2], "schemes": ["exact", "heuristic", "go", "cpto"]}})";
  const std::string config = std::string(QCPTO_SOURCE_DIR) + "/configs/default.json";

  int differing = 0;
  int failed = 0;
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path out = root / ("rep" + std::to_string(rep));
    failed += invoke({"run", "--config", config, "--seed", "5", "--out", (out / "run").string()}) != 0;
    failed += invoke({"run", "--config", sweep_cfg.string(), "--out", (out / "sweeps" / "deadline").string()}) != 0;
    failed += invoke({"oracle", "--n", "6", "--m", "2", "--count", "50", "--seed", "3", "--out",
                      (out / "oracle").string()}) != 0;
    failed += invoke({"plotdata", "--results", (out / "sweeps").string(), "--out", (out / "plots").string()}) != 0;
  }
  const auto a = snapshot(root / "rep0");
  const auto b = snapshot(root / "rep1");
  if (a.size() != b.size()) {
    ++differing;
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) differing += a[i] != b[i];
  }
  fs::remove_all(root);
  return {failed == 0 && differing == 0 && !a.empty(),
          std::to_string(a.size()) + " files compared, " + std::to_string(differing) + " differ, " +
              std::to_string(failed) + " commands failed"};
}

Outcome monotonicity() {
  GridSpec g;
  g.width = 50;
  g.height = 50;
  Rng rng(9);
  int sat_cases = 0, sat_bad = 0, aware_cases = 0, aware_bad = 0;
  while (sat_cases < 100 || aware_cases < 100) {
    const int n = 2 + static_cast<int>(rng.below(4));
    std::vector<Roi> rois;
    std::vector<Triangle> fovs;
    for (int i = 0; i < n; ++i) {
      Roi roi;
      roi.turn = Turn::Right;
      do {
        roi.triangle = oracle::random_triangle(rng, 0.0, 50.0);
      } while (rasterize_triangle(roi.triangle, g).none());
      rois.push_back(roi);
      fovs.push_back(oracle::random_triangle(rng, 0.0, 50.0));
    }
    const CoverageScene scene(g, rois, fovs);

    std::vector<User> users(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      users[static_cast<std::size_t>(i)].id = i;
      users[static_cast<std::size_t>(i)].data_rate = {15e6, 15e6};
    }
    std::vector<Worker> workers(2);
    workers[1].id = 1;
    Assignment a(n, 2);
    for (int i = 0; i < n; ++i) {
      if (rng.coin()) a.assign(i, static_cast<int>(rng.below(2)));
    }
    MetricsConfig mc;
    double last = 1.0;
    for (int step = 0; step <= 20; ++step) {
      mc.phi = step / 20.0;
      const double sat = epoch_metrics(a, scene, users, workers, mc).satisfaction;
      sat_bad += sat > last;
      last = sat;
    }
    ++sat_cases;

    // Grow the collaborator set one member at a time in random order.
    std::vector<int> others;
    for (int k = 1; k < n; ++k) others.push_back(k);
    for (std::size_t k = others.size(); k > 1; --k) std::swap(others[k - 1], others[rng.below(k)]);
    std::vector<int> team;
    double prev = scene.detected_awareness(0, team);
    for (int k : others) {
      team.push_back(k);
      const double now = scene.detected_awareness(0, team);
      aware_bad += now < prev;
      prev = now;
    }
    ++aware_cases;
  }

  int heur_cases = 0, heur_bad = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    HeurConfig cfg;
    cfg.seed = seed;
    const Solution s = solve_heuristic(oracle::random_instance(seed + 10'000), cfg);
    for (std::size_t t = 1; t < s.stats.best_history.size(); ++t) {
      heur_bad += s.stats.best_history[t] < s.stats.best_history[t - 1];
    }
    ++heur_cases;
  }
  const bool ok = sat_bad + aware_bad + heur_bad == 0;
  return {ok, std::to_string(sat_cases) + " satisfaction, " + std::to_string(aware_cases) + " awareness and " +
                  std::to_string(heur_cases) + " heuristic cases; violations " + std::to_string(sat_bad) + "/" +
                  std::to_string(aware_bad) + "/" + std::to_string(heur_bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact matches exhaustive enumeration", oracle_equivalence},
      {"heuristic optimality gap", heuristic_gap},
      {"heuristic runtime vs exact", runtime_scaling},
      {"metric dominance on the intersection scenario", metric_dominance},
      {"latency arithmetic", latency_arithmetic},
      {"Kalman filter correctness", kalman},
      {"geometry vs brute force", geometry_oracle},
      {"CLI determinism", cli_determinism},
      {"monotonicity properties", monotonicity},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << k + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << criteria[k].first
              << ") " << o.detail << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
