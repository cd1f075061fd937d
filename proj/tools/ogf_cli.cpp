// Copyright 2026 The ogf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ogf/cloud3d.hpp"
#include "ogf/ep.hpp"
#include "ogf/error.hpp"
#include "ogf/filter.hpp"
#include "ogf/io.hpp"
#include "ogf/kernel.hpp"
#include "ogf/sim2d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using ogf::cloud3d::ScanFrame;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitPathology = 1;
constexpr int kExitUsage = 2;

using Json = nlohmann::ordered_json;

struct Common
{
  std::string out = ".";
  double ro = 0.65;
  double rf = 0.35;
  bool no_timing = false;
};

struct Sim2dArgs
{
  std::string map;
  std::vector<std::size_t> samples{30, 60, 90, 120, 150, 180, 210, 240, 270, 300};
  int trials = 1;
  std::uint64_t seed = 7;
  double sigma = 1.0;
  double ep_tol = 1e-6;
  int ep_max_sweeps = 100;
};

struct Map3dArgs
{
  std::string poses;
  std::string scans;
  double resolution = 0.2;
  std::optional<double> sigma;
  std::optional<double> cutoff;
  std::string backend = "auto";
  std::vector<std::size_t> dims;
  std::vector<double> origin;
  double max_range = 100.0;
  std::size_t dense_limit = ogf::kDefaultDenseLimit;
};

struct SynthArgs
{
  ogf::cloud3d::SyntheticRoomSpec spec;
};

/// Thrown for problems that map to the usage/I-O exit code.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path & path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ogf::IoError(path.string(), 0, "cannot write file");
  }
  return os;
}

void write_text(const fs::path & path, const std::string & text)
{
  auto os = open_out(path);
  os << text << '\n';
}

fs::path prepare_out(const std::string & out)
{
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    throw ogf::IoError(out, 0, "cannot create output directory: " + ec.message());
  }
  return fs::path(out);
}

Json base_run_json(const std::string & command, const Common & c)
{
  Json j;
  j["command"] = command;
  j["version"] = OGF_VERSION;
  j["out"] = c.out;
  j["ro"] = c.ro;
  j["rf"] = c.rf;
  j["timing"] = !c.no_timing;
  return j;
}

ogf::sim2d::GroundTruthMap load_map(const std::string & path)
{
  return path.empty() ? ogf::sim2d::lab25() : ogf::sim2d::load_ground_truth(path);
}

ogf::sim2d::ExperimentConfig experiment_config(const Sim2dArgs & a, const Common & c)
{
  ogf::sim2d::ExperimentConfig cfg;
  cfg.sample_counts = a.samples;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.sigma = a.sigma;
  cfg.thresholds = ogf::Thresholds(c.ro, c.rf);
  cfg.ep.tol = a.ep_tol;
  cfg.ep.max_sweeps = a.ep_max_sweeps;
  cfg.timing = !c.no_timing;
  return cfg;
}

void add_sim2d_json(Json & j, const Sim2dArgs & a)
{
  j["map"] = a.map.empty() ? std::string("<bundled lab25>") : a.map;
  j["samples"] = a.samples;
  j["trials"] = a.trials;
  j["seed"] = a.seed;
  j["sigma"] = a.sigma;
  j["ep_tol"] = a.ep_tol;
  j["ep_max_sweeps"] = a.ep_max_sweeps;
  j["backend"] = "dense";
}

void check_samples(const Sim2dArgs & a, const ogf::sim2d::GroundTruthMap & gt)
{
  for (const auto n : a.samples) {
    if (n > gt.size()) {
      throw UsageError(
        "--samples " + std::to_string(n) + " exceeds the cell count " + std::to_string(gt.size()) +
        " of the map");
    }
  }
}

int cmd_sim2d(const Sim2dArgs & a, const Common & c)
{
  const auto gt = load_map(a.map);
  check_samples(a, gt);
  const auto cfg = experiment_config(a, c);
  const fs::path out = prepare_out(c.out);

  Json run = base_run_json("sim2d", c);
  add_sim2d_json(run, a);
  write_text(out / "run.json", run.dump(2));

  std::vector<ogf::sim2d::ExperimentRow> rows;
  bool pathology = false;
  std::optional<ogf::sim2d::TrialResult> last;
  for (const auto n : cfg.sample_counts) {
    for (int t = 0; t < cfg.trials; ++t) {
      auto r = ogf::sim2d::run_trial(cfg, gt, n, t);
      pathology = pathology || r.ep.diverged || r.ep.aborted;
      rows.push_back(ogf::sim2d::summarize(r));
      last = std::move(r);
    }
  }
  {
    auto os = open_out(out / "results.csv");
    ogf::sim2d::write_results_csv(os, rows);
  }
  if (last) {
    const auto lattice = gt.lattice();
    auto os = open_out(out / "map_ogf.csv");
    ogf::io::write_ternary_csv(os, last->ogf, last->ogf_map);
    auto os_ep = open_out(out / "map_ep.csv");
    ogf::io::write_ternary_csv(os_ep, last->ep.posterior, last->ep_map);
    auto os_lo = open_out(out / "map_baseline.csv");
    ogf::io::write_ternary_csv(os_lo, lattice, last->baseline_map, last->baseline.values());
  }
  std::cout << "wrote " << rows.size() << " rows to " << (out / "results.csv").string() << '\n';
  if (pathology) {
    std::cerr << "error: EP diverged or aborted in at least one trial\n";
    return kExitPathology;
  }
  return kExitOk;
}

double max_abs_diff(const Eigen::MatrixXd & a, const Eigen::MatrixXd & b)
{
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

double metric_or_nan(const ogf::LatentMap & est, const ogf::LatentMap & ref)
{
  try {
    return ogf::sim2d::map_difference(
      std::span<const double>(est.mean().data(), est.size()),
      std::span<const double>(ref.mean().data(), ref.size()));
  } catch (const ogf::NumericalError &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

Json num(double v)
{
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

int cmd_compare(const Sim2dArgs & a, const Common & c)
{
  const auto gt = load_map(a.map);
  if (a.samples.size() != 1) {
    throw UsageError("compare takes exactly one --samples value");
  }
  check_samples(a, gt);
  const auto cfg = experiment_config(a, c);
  const fs::path out = prepare_out(c.out);

  Json run = base_run_json("compare", c);
  add_sim2d_json(run, a);
  write_text(out / "run.json", run.dump(2));

  const auto prior = ogf::build_prior(gt.lattice(), ogf::KernelConfig{a.sigma});
  const auto batch = ogf::sim2d::sample_without_repetition(gt, a.samples.front(), a.seed);

  ogf::LatentMap streamed = prior;
  ogf::filter::process(streamed, batch);
  const ogf::LatentMap single = ogf::ep::single_sweep(prior, batch);
  const ogf::ep::State conv = ogf::ep::run(prior, batch, cfg.ep);

  Json r;
  r["samples"] = a.samples.front();
  r["ogf_vs_single_sweep_mean"] = max_abs_diff(streamed.mean(), single.mean());
  r["ogf_vs_single_sweep_cov"] =
    max_abs_diff(streamed.covariance_matrix(), single.covariance_matrix());
  r["converged_vs_single_sweep_mean"] = max_abs_diff(conv.posterior.mean(), single.mean());
  r["converged_vs_single_sweep_cov"] =
    max_abs_diff(conv.posterior.covariance_matrix(), single.covariance_matrix());
  r["mapdiff_ogf_vs_converged"] = num(metric_or_nan(streamed, conv.posterior));
  r["ep_sweeps"] = conv.sweeps;
  r["ep_converged"] = conv.converged;
  r["ep_diverged"] = conv.diverged;
  r["ep_aborted"] = conv.aborted;
  write_text(out / "compare.json", r.dump(2));
  std::cout << r.dump(2) << '\n';
  return conv.diverged || conv.aborted ? kExitPathology : kExitOk;
}

std::vector<ScanFrame> read_scans(const Map3dArgs & a)
{
  if (!fs::exists(a.poses)) {
    throw ogf::IoError(a.poses, 0, "poses file not found");
  }
  if (!fs::exists(a.scans)) {
    throw ogf::IoError(a.scans, 0, "scans file not found");
  }
  const auto poses = ogf::cloud3d::load_poses(a.poses);
  return ogf::cloud3d::load_scans(a.scans, poses);
}

// Bounding box of poses and returns, padded by one cell.
ogf::GridLattice fit_lattice(const std::vector<ScanFrame> & scans, double res)
{
  ogf::Point lo = ogf::Point::Constant(std::numeric_limits<double>::infinity());
  ogf::Point hi = -lo;
  for (const auto & f : scans) {
    const Eigen::Matrix3d rot = f.pose.orientation.toRotationMatrix();
    lo = lo.cwiseMin(f.pose.position);
    hi = hi.cwiseMax(f.pose.position);
    for (const auto & p : f.points) {
      const ogf::Point w = f.pose.position + rot * p;
      lo = lo.cwiseMin(w);
      hi = hi.cwiseMax(w);
    }
  }
  if (scans.empty()) {
    throw UsageError("no scans to fit a lattice to; pass --dims");
  }
  std::vector<std::size_t> dims(3);
  const ogf::Point origin = lo - ogf::Point::Constant(res);
  for (int a = 0; a < 3; ++a) {
    dims[a] = static_cast<std::size_t>(std::floor((hi[a] - origin[a]) / res + 0.5)) + 2;
  }
  return ogf::GridLattice(dims, res, origin);
}

int cmd_map3d(const Map3dArgs & a, const Common & c)
{
  const auto scans = read_scans(a);
  if (!(a.resolution > 0.0)) {
    throw UsageError("--resolution must be positive");
  }
  std::optional<ogf::GridLattice> lattice;
  if (!a.dims.empty()) {
    if (a.dims.size() != 3 || (!a.origin.empty() && a.origin.size() != 3)) {
      throw UsageError("--dims and --origin take three comma-separated values");
    }
    ogf::Point origin = ogf::Point::Zero();
    if (!a.origin.empty()) {
      origin = ogf::Point(a.origin[0], a.origin[1], a.origin[2]);
    }
    lattice.emplace(a.dims, a.resolution, origin);
  } else {
    lattice.emplace(fit_lattice(scans, a.resolution));
  }

  auto cfg = ogf::cloud3d::default_config(*lattice);
  cfg.thresholds = ogf::Thresholds(c.ro, c.rf);
  cfg.max_range = a.max_range;
  cfg.dense_limit = a.dense_limit;
  if (a.sigma) {
    cfg.kernel.sigma = *a.sigma;
  }
  if (a.cutoff) {
    cfg.kernel.cutoff_radius = *a.cutoff;
  }
  if (a.backend == "dense") {
    cfg.backend = ogf::CovarianceBackend::kDense;
  } else if (a.backend == "sparse") {
    cfg.backend = ogf::CovarianceBackend::kSparse;
  }

  const fs::path out = prepare_out(c.out);
  Json run = base_run_json("map3d", c);
  run["poses"] = a.poses;
  run["scans"] = a.scans;
  run["resolution"] = a.resolution;
  run["sigma"] = cfg.kernel.sigma;
  run["cutoff_radius"] = num(cfg.kernel.cutoff_radius);
  run["backend"] = cfg.backend == ogf::CovarianceBackend::kDense ? "dense" : "sparse";
  run["dims"] = lattice->dims();
  run["origin"] = {lattice->origin().x(), lattice->origin().y(), lattice->origin().z()};
  run["max_range"] = a.max_range;
  run["dense_limit"] = a.dense_limit;
  write_text(out / "run.json", run.dump(2));

  const auto result = ogf::cloud3d::build_map_3d(scans, *lattice, cfg);
  {
    auto os = open_out(out / "map.csv");
    ogf::io::write_ternary_csv(os, result.map, result.ternary);
  }
  {
    auto os = open_out(out / "occupied.ply");
    ogf::io::write_occupied_ply(os, *lattice, result.ternary);
  }
  const std::string stats = ogf::cloud3d::stats_json(result.stats);
  write_text(out / "stats.json", stats);
  std::cout << stats << '\n';
  return kExitOk;
}

int cmd_synth_room(const SynthArgs & a, const Common & c)
{
  const auto room = ogf::cloud3d::make_synthetic_room(a.spec);
  const fs::path out = prepare_out(c.out);
  ogf::cloud3d::write_poses((out / "poses.csv").string(), room.scans);
  ogf::cloud3d::write_scans((out / "scans.csv").string(), room.scans);
  {
    auto os = open_out(out / "truth.csv");
    os << "cx,cy,cz,truth\n";
    for (std::size_t i = 0; i < room.truth.size(); ++i) {
      const auto idx = room.lattice.unravel(i);
      os << idx[0] << ',' << idx[1] << ',' << idx[2] << ',' << int(room.truth[i]) << '\n';
    }
  }
  Json run = base_run_json("synth-room", c);
  run["dims"] = a.spec.dims;
  run["resolution"] = a.spec.resolution;
  run["origin"] = {0.0, 0.0, 0.0};
  run["margin"] = a.spec.margin;
  run["poses"] = a.spec.n_poses;
  run["beams"] = a.spec.beams_per_scan;
  run["beam_stride"] = a.spec.beam_stride;
  run["wall_cells"] = room.wall_cells();
  write_text(out / "run.json", run.dump(2));
  std::cout << "wall_cells " << room.wall_cells() << '\n';
  return kExitOk;
}

void add_common(CLI::App * sub, Common & c, bool thresholds = true)
{
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  if (thresholds) {
    sub->add_option("--ro", c.ro, "Occupied probability threshold")->capture_default_str();
    sub->add_option("--rf", c.rf, "Free probability threshold")->capture_default_str();
  }
  sub->add_flag("--no-timing", c.no_timing, "Report zero wall times for reproducible output");
}

void add_sim2d_options(CLI::App * sub, Sim2dArgs & a)
{
  sub->add_option("--map", a.map, "Ground-truth map file (bundled 25x25 map if omitted)");
  sub->add_option("--samples", a.samples, "Sample counts")->delimiter(',')->capture_default_str();
  sub->add_option("--seed", a.seed, "Base seed")->capture_default_str();
  sub->add_option("--sigma", a.sigma, "Kernel width")->capture_default_str();
  sub->add_option("--ep-tol", a.ep_tol, "EP convergence tolerance")->capture_default_str();
  sub->add_option("--ep-max-sweeps", a.ep_max_sweeps, "EP sweep limit")->capture_default_str();
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Gaussian-process occupancy filtering"};
  app.set_version_flag("--version", OGF_VERSION);
  app.require_subcommand(1);

  Common common;
  Sim2dArgs sim;
  Map3dArgs m3;
  SynthArgs synth;

  auto * s2 = app.add_subcommand("sim2d", "2-D simulation: filter vs EP vs log-odds");
  add_sim2d_options(s2, sim);
  s2->add_option("--trials", sim.trials, "Trials per sample count")->capture_default_str();
  add_common(s2, common);

  auto * cmp = app.add_subcommand("compare", "One batch through filter, single-sweep EP, converged EP");
  add_sim2d_options(cmp, sim);
  add_common(cmp, common);

  auto * m = app.add_subcommand("map3d", "Build a 3-D map from pose-stamped scans");
  m->add_option("--poses", m3.poses, "Poses CSV")->required();
  m->add_option("--scans", m3.scans, "Scans CSV")->required();
  m->add_option("--resolution", m3.resolution, "Cell size in meters")->capture_default_str();
  m->add_option("--sigma", m3.sigma, "Kernel width (default: half a cell)");
  m->add_option("--cutoff-radius", m3.cutoff, "Kernel cutoff (default: three cells)");
  m->add_option("--backend", m3.backend, "Covariance backend")
    ->check(CLI::IsMember({"auto", "dense", "sparse"}))
    ->capture_default_str();
  m->add_option("--dims", m3.dims, "Lattice cells per axis")->delimiter(',');
  m->add_option("--origin", m3.origin, "Center of cell (0,0,0)")->delimiter(',');
  m->add_option("--max-range", m3.max_range, "Sensor range in meters")->capture_default_str();
  m->add_option("--dense-limit", m3.dense_limit, "Largest lattice for the dense backend")
    ->capture_default_str();
  add_common(m, common);

  auto * sr = app.add_subcommand("synth-room", "Write a synthetic room as poses and scans");
  sr->add_option("--beams", synth.spec.beams_per_scan, "Beams per scan")->capture_default_str();
  sr->add_option("--poses", synth.spec.n_poses, "Number of poses")->capture_default_str();
  sr->add_option("--stride", synth.spec.beam_stride, "Keep every k-th beam")->capture_default_str();
  sr->add_option("--resolution", synth.spec.resolution, "Cell size")->capture_default_str();
  add_common(sr, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s2) {
      return cmd_sim2d(sim, common);
    }
    if (*cmp) {
      return cmd_compare(sim, common);
    }
    if (*m) {
      return cmd_map3d(m3, common);
    }
    return cmd_synth_room(synth, common);
  } catch (const ogf::ep::Pathology & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPathology;
  } catch (const ogf::NumericalError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPathology;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
