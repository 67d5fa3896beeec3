#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dikernel/catalog.h"
#include "dikernel/dynamics.h"
#include "dikernel/game.h"
#include "dikernel/io.h"
#include "dikernel/kernel.h"
#include "dikernel/metrics.h"
#include "dikernel/transform.h"

namespace dikernel::cli {
namespace {

using io::Json;

// Raised for usage problems detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KernelSource {
  std::string path;
  std::string catalog;
  int resolution = 64;
};

void AddKernelSource(CLI::App* sub, KernelSource& src) {
  auto* k = sub->add_option("--kernel", src.path, "Kernel JSON file");
  auto* c = sub->add_option("--catalog", src.catalog,
                            "Built-in kernel (figure3a, constant, bilinear:a, "
                            "unitype:k, blend:l:inner)");
  k->excludes(c);
  sub->add_option("--resolution", src.resolution,
                  "Cells of the uniform grid a catalog kernel is averaged on")
      ->check(CLI::PositiveNumber);
}

Kernel LoadKernel(const KernelSource& src) {
  if (!src.path.empty()) return io::KernelFromJson(io::ReadFile(src.path));
  if (!src.catalog.empty()) {
    return DiscretizeKernel(CatalogKernel(src.catalog),
                            IntervalPartition::Uniform(src.resolution));
  }
  throw UsageError("one of --kernel or --catalog is required");
}

// Grid kernels become block kernels on their own cells.
BlockKernel AsBlock(const Kernel& w) {
  return DiscretizeKernel(w, CarrierPartition(w));
}

AnalyticKernel LoadCatalog(const std::string& name) {
  if (name.empty()) throw UsageError("--catalog is required");
  return CatalogKernel(name);
}

// Inline JSON when the text looks like JSON, otherwise a file path.
Json JsonArgument(const std::string& text) {
  auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw io::FormatError(std::string("malformed inline JSON: ") + e.what());
    }
  }
  return io::ReadFile(text);
}

void Emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << io::Dump(j) << '\n';
  } else {
    io::WriteFile(path, j);
  }
}

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Options {
  KernelSource kernel;
  std::string other;
  std::string out;
  std::string report;
  std::string opinions;
  std::string partition;
  std::string matrix;
  std::string model;
  std::string groups;
  std::string game;
  std::string profile;
  int t = 10;
  double tol = 0.0;
  int max_iter = 0;
  uint64_t seed = 0;
  double damping = 0.5;
  int n = 16;
  double eta = 0.0;
  double delta = 0.9;
  double alpha = 1.0;
  double cut = 0.0;
  int audit_resolution = 0;
};

int Simulate(const Options& o, std::ostream& out) {
  Kernel w = LoadKernel(o.kernel);
  const IntervalPartition& part = CarrierPartition(w);
  std::vector<double> values = io::ParseNumberList(o.opinions);
  OpinionFunction f0 =
      values.size() == 1
          ? OpinionFunction::Constant(part, values[0])
          : OpinionFunction(part, Eigen::Map<const Eigen::VectorXd>(
                                      values.data(),
                                      static_cast<int>(values.size())));
  std::vector<OpinionFunction> traj = Iterate(w, f0, o.t);
  std::ostringstream csv;
  csv << "t,cell,value\n";
  for (size_t t = 0; t < traj.size(); ++t) {
    for (int j = 0; j < traj[t].size(); ++j) {
      csv << t << ',' << j << ',' << Number(traj[t].values()[j]) << '\n';
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(o.out);
    if (!file) throw io::FormatError("cannot write '" + o.out + "'");
    file << csv.str();
  }
  ConsensusReport report = Consensus(w, f0, o.tol, o.max_iter);
  if (!o.report.empty()) io::WriteFile(o.report, io::ToJson(report));
  return report.converged ? kExitOk : kExitNotConverged;
}

int Discretize(const Options& o, std::ostream& out) {
  IntervalPartition v = io::ParsePartition(o.partition);
  BlockKernel result =
      o.kernel.path.empty() && !o.kernel.catalog.empty()
          ? DiscretizeKernel(CatalogKernel(o.kernel.catalog), v)
          : DiscretizeKernel(LoadKernel(o.kernel), v);
  Emit(io::ToJson(result), o.out, out);
  return kExitOk;
}

int LiftCommand(const Options& o, std::ostream& out) {
  WeightedDeGrootModel m = io::ModelFromJson(io::ReadFile(o.matrix));
  LiftedModel lifted = o.partition.empty()
                           ? Lift(m)
                           : Lift(m, io::ParsePartition(o.partition));
  Emit(io::ToJson(lifted.kernel), o.out, out);
  return kExitOk;
}

int Reduce(const Options& o, std::ostream& out) {
  WeightedDeGrootModel m = io::ModelFromJson(io::ReadFile(o.model));
  WeightedDeGrootModel r =
      ReduceDimension(m, io::GroupsFromJson(JsonArgument(o.groups)));
  Emit(io::ToJson(r), o.out, out);
  return kExitOk;
}

int CutNormCommand(const Options& o, std::ostream& out) {
  BoundReport report;
  Json extra = Json::object();
  if (!o.other.empty()) {
    BlockKernel w = AsBlock(LoadKernel(o.kernel));
    BlockKernel v = AsBlock(io::KernelFromJson(io::ReadFile(o.other)));
    SignedBlockKernel u = Difference(w, v);
    CutNormResult r = CutNorm(u, 64, o.seed);
    report.bound = r.value;
    report.kind = "cut_norm";
    report.inputs = {{"cells", u.size()},
                     {"exact", u.size() <= kMaxExactCutCells ? 1.0 : 0.0}};
    extra = io::ToJson(r);
  } else {
    AnalyticKernel w = LoadCatalog(o.kernel.catalog);
    if (o.partition.empty()) throw UsageError("--partition is required");
    IntervalPartition v = io::ParsePartition(o.partition);
    CutDistanceEstimate est = EstimateCutDistance(w, v, o.kernel.resolution);
    report.bound = est.upper;
    report.kind = "cut_distance_estimate";
    report.inputs = {{"lower", est.lower},
                     {"upper", est.upper},
                     {"exact_lower", est.exact_lower ? 1.0 : 0.0},
                     {"fine_n", o.kernel.resolution},
                     {"cells", v.size()}};
  }
  Json j = io::ToJson(report);
  if (extra.contains("rows")) {
    j["rows"] = extra["rows"];
    j["cols"] = extra["cols"];
  }
  Emit(j, o.out, out);
  return kExitOk;
}

int Bounds(const Options& o, std::ostream& out) {
  AnalyticKernel w = LoadCatalog(o.kernel.catalog);
  const LipschitzMeta& meta = w.meta();
  std::vector<BoundReport> reports;
  double partition = BoundPartition(meta, o.n);
  reports.push_back({partition,
                     "partition",
                     {{"theta", meta.theta},
                      {"pieces", meta.num_pieces()},
                      {"bound_m", meta.bound},
                      {"n", o.n}}});
  double cut = o.cut > 0 ? o.cut : partition;
  reports.push_back({BoundDynamic(o.t, cut), "dynamic", {{"t", o.t}, {"cut", cut}}});
  reports.push_back({BoundDiscounted(o.alpha, o.delta, cut),
                     "discounted",
                     {{"alpha", o.alpha}, {"delta", o.delta}, {"cut", cut}}});
  if (o.eta > 0) {
    reports.push_back({static_cast<double>(MinPartitionSize(o.eta, meta)),
                       "min_partition_size",
                       {{"eta", o.eta},
                        {"theta", meta.theta},
                        {"pieces", meta.num_pieces()},
                        {"bound_m", meta.bound}}});
  }
  Json list = Json::array();
  for (const BoundReport& r : reports) list.push_back(io::ToJson(r));
  Emit({{"kernel", w.name()}, {"reports", list}}, o.out, out);
  return kExitOk;
}

int Stationary(const Options& o, std::ostream& out) {
  StationaryDensity st =
      ComputeStationaryDensity(LoadKernel(o.kernel), o.tol, o.max_iter);
  Emit(io::ToJson(st), o.out, out);
  return st.converged ? kExitOk : kExitNotConverged;
}

GameSpec LoadGame(const Options& o) {
  GameSpec spec = io::GameSpecFromJson(io::ReadFile(o.game));
  if (o.audit_resolution > 0) {
    spec = DiscretizeGame(spec, IntervalPartition::Uniform(o.audit_resolution));
  }
  return spec;
}

int SolveGame(const Options& o, std::ostream& out) {
  GameSpec spec = LoadGame(o);
  NashOptions options;
  options.damping = o.damping;
  options.tol = o.tol;
  options.max_iter = o.max_iter;
  options.seed = o.seed;
  EquilibriumReport r = SolveNash(spec, options);
  Emit(io::ToJson(r), o.out, out);
  return r.converged ? kExitOk : kExitNotConverged;
}

int VerifyNash(const Options& o, std::ostream& out) {
  GameSpec base = io::GameSpecFromJson(io::ReadFile(o.game));
  auto [s1, s2] =
      io::ProfileFromJson(io::ReadFile(o.profile), CarrierPartition(base.kernel));
  GameSpec spec = LoadGame(o);
  const IntervalPartition& part = CarrierPartition(spec.kernel);
  if (!SamePartition(part, s1.partition())) {
    s1 = s1.RefineTo(part);
    s2 = s2.RefineTo(part);
  }
  ResidualReport r1 = EpsilonResidual(spec, s1, s2, 1, o.seed);
  ResidualReport r2 = EpsilonResidual(spec, s1, s2, 2, o.seed + 1);
  Emit({{"epsilon", std::max(r1.epsilon, r2.epsilon)},
        {"residuals", {io::ToJson(r1), io::ToJson(r2)}}},
       o.out, out);
  return kExitOk;
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Continuous DeGroot dynamics on DiKernels", "dikernel"};
  app.require_subcommand(1);
  Options o;
  auto out_opt = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto tol_opts = [&](CLI::App* sub, double tol, int max_iter) {
    o.tol = tol;
    o.max_iter = max_iter;
    sub->add_option("--tol", o.tol, "Convergence tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "Iteration cap")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "Trajectory CSV and consensus report");
  AddKernelSource(simulate, o.kernel);
  simulate->add_option("--opinions", o.opinions,
                       "Initial opinions, one per cell or a single constant")
      ->required();
  simulate->add_option("--t", o.t, "Number of steps")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--report", o.report, "Consensus report JSON file");

  CLI::App* discretize =
      app.add_subcommand("discretize", "Block average of a kernel on a partition");
  AddKernelSource(discretize, o.kernel);
  discretize->add_option("--partition", o.partition,
                         "uniform:n or breakpoints 0,...,1")
      ->required();

  CLI::App* lift = app.add_subcommand("lift", "Kernel of a weighted DeGroot model");
  lift->add_option("--matrix", o.matrix, "Model JSON file")->required();
  lift->add_option("--partition", o.partition,
                   "Partition (default: built from the weights)");

  CLI::App* reduce =
      app.add_subcommand("reduce", "Group agents into a smaller model");
  reduce->add_option("--model", o.model, "Model JSON file")->required();
  reduce->add_option("--groups", o.groups, "Groups as inline JSON or a file")
      ->required();

  CLI::App* cutnorm = app.add_subcommand(
      "cutnorm", "Cut norm of a kernel difference or of W - W_V");
  AddKernelSource(cutnorm, o.kernel);
  cutnorm->add_option("--other", o.other, "Second kernel JSON file");
  cutnorm->add_option("--partition", o.partition,
                      "Partition V for a catalog kernel");
  cutnorm->add_option("--seed", o.seed, "Seed of the heuristic search");

  CLI::App* bounds = app.add_subcommand("bounds", "Error bound reports");
  bounds->add_option("--catalog", o.kernel.catalog, "Built-in kernel")
      ->required();
  bounds->add_option("--n", o.n, "Partition size")->check(CLI::PositiveNumber);
  bounds->add_option("--t", o.t, "Steps")->check(CLI::NonNegativeNumber);
  bounds->add_option("--eta", o.eta, "Target accuracy for the minimal size");
  bounds->add_option("--delta", o.delta, "Discount factor");
  bounds->add_option("--alpha", o.alpha, "Lipschitz constant of the utility");
  bounds->add_option("--cut", o.cut,
                     "Cut distance (default: the partition bound)");

  CLI::App* stationary =
      app.add_subcommand("stationary", "Stationary density of a kernel");
  AddKernelSource(stationary, o.kernel);

  CLI::App* solve = app.add_subcommand("solve-game", "Equilibrium of a lobby game");
  solve->add_option("--game", o.game, "Game JSON file")->required();
  solve->add_option("--damping", o.damping, "Best-response damping in (0, 1]");
  solve->add_option("--seed", o.seed, "Seed of the randomized starts");
  solve->add_option("--resolution", o.audit_resolution,
                    "Solve the game discretized on uniform(n)");

  CLI::App* verify =
      app.add_subcommand("verify-nash", "Epsilon residuals of a profile");
  verify->add_option("--game", o.game, "Game JSON file")->required();
  verify->add_option("--profile", o.profile, "Profile JSON file")->required();
  verify->add_option("--seed", o.seed, "Seed of the randomized starts");
  verify->add_option("--resolution", o.audit_resolution,
                     "Audit inside the game discretized on uniform(n)");

  for (CLI::App* sub : {simulate, discretize, lift, reduce, cutnorm, bounds,
                        stationary, solve, verify}) {
    out_opt(sub);
  }
  tol_opts(simulate, 1e-12, 10000);
  tol_opts(stationary, 1e-12, 100000);
  tol_opts(solve, 1e-10, 10000);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dikernel: " << OneLine(e.what()) << '\n';
    return kExitError;
  }

  try {
    if (simulate->parsed()) return Simulate(o, out);
    if (discretize->parsed()) return Discretize(o, out);
    if (lift->parsed()) return LiftCommand(o, out);
    if (reduce->parsed()) return Reduce(o, out);
    if (cutnorm->parsed()) return CutNormCommand(o, out);
    if (bounds->parsed()) return Bounds(o, out);
    if (stationary->parsed()) return Stationary(o, out);
    if (solve->parsed()) return SolveGame(o, out);
    if (verify->parsed()) return VerifyNash(o, out);
  } catch (const std::exception& e) {
    err << "dikernel: " << OneLine(e.what()) << '\n';
    return kExitError;
  }
  err << "dikernel: no subcommand\n";
  return kExitError;
}

}  // namespace dikernel::cli
