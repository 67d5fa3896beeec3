#include "dikernel/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dikernel/catalog.h"
#include "dikernel/errors.h"

namespace dikernel::io {
namespace {

void DumpTo(const Json& j, std::string* out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out->push_back('{');
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out->push_back(',');
        first = false;
        out->append(Json(key).dump());
        out->push_back(':');
        DumpTo(value, out);
      }
      out->push_back('}');
      break;
    }
    case Json::value_t::array: {
      out->push_back('[');
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out->push_back(',');
        DumpTo(j[i], out);
      }
      out->push_back(']');
      break;
    }
    case Json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out->append("null");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out->append(buf);
      }
      break;
    }
    default:
      out->append(j.dump());
  }
}

const Json& Require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Eigen::VectorXd VectorFromJson(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = ParseNumber(j[i]);
  return v;
}

Eigen::MatrixXd MatrixFromJson(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("expected a matrix");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw FormatError("matrix rows must be arrays of equal length");
    }
    for (size_t c = 0; c < cols; ++c) m(i, c) = ParseNumber(j[i][c]);
  }
  return m;
}

Json MatrixJson(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.push_back(ValuesJson(m.row(i).transpose()));
  }
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

double ParseDecimal(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::string Dump(const Json& j) {
  std::string out;
  DumpTo(j, &out);
  return out;
}

Json ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError("malformed JSON in '" + path + "': " + e.what());
  }
}

void WriteFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << Dump(j) << '\n';
}

double ParseNumber(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return ParseNumberText(j.get<std::string>());
  throw FormatError("expected a number, got " + j.dump());
}

double ParseNumberText(std::string_view text) {
  std::string s = Trim(text);
  size_t slash = s.find('/');
  if (slash == std::string::npos) return ParseDecimal(s);
  double num = ParseDecimal(Trim(s.substr(0, slash)));
  double den = ParseDecimal(Trim(s.substr(slash + 1)));
  if (den == 0.0) throw FormatError("zero denominator in '" + s + "'");
  return num / den;
}

std::vector<double> ParseNumberList(std::string_view text) {
  std::vector<double> out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (Trim(item).empty()) continue;
    out.push_back(ParseNumberText(item));
  }
  if (out.empty()) throw FormatError("empty number list");
  return out;
}

IntervalPartition ParsePartition(std::string_view text) {
  std::string s = Trim(text);
  if (s.rfind("uniform:", 0) == 0) {
    int n = 0;
    std::string tail = s.substr(8);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      throw FormatError("bad partition '" + s + "'");
    }
    return IntervalPartition::Uniform(n);
  }
  return IntervalPartition(ParseNumberList(s));
}

Json ToJson(const IntervalPartition& p) {
  return Json{{"breakpoints", ValuesJson(Eigen::Map<const Eigen::VectorXd>(
                                  p.breakpoints().data(),
                                  static_cast<Eigen::Index>(
                                      p.breakpoints().size())))}};
}

IntervalPartition PartitionFromJson(const Json& j) {
  const Json& b = j.is_object() ? Require(j, "breakpoints") : j;
  if (b.is_string()) return ParsePartition(b.get<std::string>());
  Eigen::VectorXd v = VectorFromJson(b);
  return IntervalPartition(std::vector<double>(v.data(), v.data() + v.size()));
}

Json ToJson(const BlockKernel& w) {
  Json out = {{"type", "block"},
              {"bound", w.bound()},
              {"values", MatrixJson(w.values())}};
  out["partition"] = ToJson(w.partition())["breakpoints"];
  return out;
}

Json ToJson(const GridKernel& w) {
  return {{"type", "grid"},
          {"n", w.n()},
          {"bound", w.bound()},
          {"samples", MatrixJson(w.samples())}};
}

Json ToJson(const Kernel& w) {
  return std::visit([](const auto& k) { return ToJson(k); }, w);
}

Kernel KernelFromJson(const Json& j) {
  std::string type = Require(j, "type").get<std::string>();
  double bound = j.contains("bound") ? ParseNumber(j.at("bound")) : 0.0;
  if (type == "block") {
    return BlockKernel(PartitionFromJson(Require(j, "partition")),
                       MatrixFromJson(Require(j, "values")), bound);
  }
  if (type == "grid") {
    Eigen::MatrixXd s = MatrixFromJson(Require(j, "samples"));
    if (j.contains("n") && j.at("n").get<int>() != s.rows()) {
      throw FormatError("grid size does not match the samples");
    }
    return GridKernel(std::move(s), bound);
  }
  if (type == "catalog") {
    AnalyticKernel w = CatalogKernel(Require(j, "name").get<std::string>());
    int n = Require(j, "resolution").get<int>();
    return DiscretizeKernel(w, IntervalPartition::Uniform(n));
  }
  throw FormatError("unknown kernel type '" + type + "'");
}

Json ToJson(const WeightedDeGrootModel& m) {
  Json out = {{"matrix", MatrixJson(m.matrix)}, {"weights", ValuesJson(m.weights)}};
  if (m.opinions) out["opinions"] = ValuesJson(*m.opinions);
  return out;
}

WeightedDeGrootModel ModelFromJson(const Json& j) {
  WeightedDeGrootModel m =
      WeightedDeGrootModel::Classical(MatrixFromJson(Require(j, "matrix")));
  if (j.contains("weights")) m.weights = VectorFromJson(j.at("weights"));
  if (j.contains("opinions") && !j.at("opinions").is_null()) {
    m.opinions = VectorFromJson(j.at("opinions"));
  }
  ValidateModel(m);
  return m;
}

std::vector<std::vector<int>> GroupsFromJson(const Json& j) {
  const Json& g = j.is_object() ? Require(j, "groups") : j;
  if (!g.is_array()) throw FormatError("groups must be an array of arrays");
  std::vector<std::vector<int>> out;
  for (const Json& group : g) {
    if (!group.is_array()) throw FormatError("each group must be an array");
    std::vector<int> cells;
    for (const Json& c : group) {
      if (!c.is_number_integer()) throw FormatError("group members are indices");
      cells.push_back(c.get<int>());
    }
    out.push_back(std::move(cells));
  }
  return out;
}

StepFunction FunctionFromJson(const Json& j, const IntervalPartition& part) {
  if (j.is_number() || j.is_string()) {
    return StepFunction::Constant(part, ParseNumber(j));
  }
  if (j.is_object()) {
    StepFunction f(PartitionFromJson(j), VectorFromJson(Require(j, "values")));
    if (SamePartition(f.partition(), part)) return f;
    if (IsRefinementOf(part, f.partition())) return f.RefineTo(part);
    throw ShapeError("function partition does not match the kernel");
  }
  Eigen::VectorXd v = VectorFromJson(j);
  if (v.size() != part.size()) {
    throw ShapeError("expected " + std::to_string(part.size()) +
                     " cell values, got " + std::to_string(v.size()));
  }
  return StepFunction(part, std::move(v));
}

Json ToJson(const StepFunction& f) {
  return {{"breakpoints", ToJson(f.partition())["breakpoints"]},
          {"values", ValuesJson(f.values())}};
}

Json ValuesJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json ToJson(const BoundReport& r) {
  Json inputs = Json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  return {{"bound", r.bound}, {"kind", r.kind}, {"inputs", inputs}};
}

Json ToJson(const CutNormResult& r) {
  return {{"value", r.value}, {"rows", r.rows}, {"cols", r.cols}};
}

Json ToJson(const StationaryDensity& s) {
  return {{"density", ToJson(s.density)},
          {"residual", s.residual},
          {"rate", s.rate},
          {"iterations", s.iterations},
          {"converged", s.converged}};
}

Json ToJson(const ConsensusReport& r) {
  return {{"value", r.value},
          {"certified", r.certified},
          {"gamma", r.gamma},
          {"rho", r.rho},
          {"alpha", r.alpha},
          {"sup_distances", r.sup_distances},
          {"steps", r.steps},
          {"converged", r.converged},
          {"stationary", ToJson(r.stationary)}};
}

GameSpec GameSpecFromJson(const Json& j) {
  Kernel kernel = KernelFromJson(Require(j, "kernel"));
  const IntervalPartition& part = CarrierPartition(kernel);
  auto field = [&](const char* key, double fallback) {
    return j.contains(key) ? FunctionFromJson(j.at(key), part)
                           : StepFunction::Constant(part, fallback);
  };
  ContestKind kind = ContestKind::kWeighted;
  if (j.contains("operator")) {
    std::string op = j.at("operator").get<std::string>();
    if (op == "additive") kind = ContestKind::kAdditiveClipped;
    else if (op != "weighted") throw FormatError("unknown operator '" + op + "'");
  }
  GameSpec spec{
      .kernel = kernel,
      .contest = kind,
      .f0 = OpinionFunction(FunctionFromJson(Require(j, "f0"), part)),
      .s0 = field("s0", 1.0),
      .psi1 = field("psi1", 1.0),
      .psi2 = field("psi2", 1.0),
      .b1 = ParseNumber(Require(j, "b1")),
      .b2 = ParseNumber(Require(j, "b2")),
      .delta = ParseNumber(Require(j, "delta")),
  };
  if (j.contains("tol")) spec.tol = ParseNumber(j.at("tol"));
  return ValidateGame(std::move(spec));
}

Json ToJson(const GameSpec& spec) {
  return {{"kernel", ToJson(spec.kernel)},
          {"operator",
           spec.contest == ContestKind::kWeighted ? "weighted" : "additive"},
          {"f0", ValuesJson(spec.f0.values())},
          {"s0", ValuesJson(spec.s0.values())},
          {"psi1", ValuesJson(spec.psi1.values())},
          {"psi2", ValuesJson(spec.psi2.values())},
          {"b1", spec.b1},
          {"b2", spec.b2},
          {"delta", spec.delta},
          {"tol", spec.tol}};
}

std::pair<StepFunction, StepFunction> ProfileFromJson(
    const Json& j, const IntervalPartition& part) {
  return {FunctionFromJson(Require(j, "s1"), part),
          FunctionFromJson(Require(j, "s2"), part)};
}

Json ToJson(const ResidualReport& r) {
  return {{"epsilon", r.epsilon},
          {"exact", r.exact},
          {"converged", r.converged},
          {"best_value", r.best_value},
          {"current_value", r.current_value}};
}

Json ToJson(const EquilibriumReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"s1", ValuesJson(r.s1.values())},
          {"s2", ValuesJson(r.s2.values())},
          {"utilities", {r.u1, r.u2}},
          {"residuals", {ToJson(r.r1), ToJson(r.r2)}}};
}

}  // namespace dikernel::io
