#ifndef DIKERNEL_IO_H_
#define DIKERNEL_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dikernel/dynamics.h"
#include "dikernel/game.h"
#include "dikernel/kernel.h"
#include "dikernel/metrics.h"
#include "dikernel/partition.h"
#include "dikernel/transform.h"

namespace dikernel::io {

using Json = nlohmann::json;

// Thrown for JSON that does not describe a valid object.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Canonical text: sorted keys, doubles with 17 significant digits, integers
// verbatim, non-finite numbers as null.
std::string Dump(const Json& j);

Json ReadFile(const std::string& path);
void WriteFile(const std::string& path, const Json& j);

// A number, or a string "p/q" or decimal.
double ParseNumber(const Json& j);
double ParseNumberText(std::string_view text);

// "uniform:n" or a comma-separated breakpoint list ("0,1/6,1/2,1").
IntervalPartition ParsePartition(std::string_view text);
std::vector<double> ParseNumberList(std::string_view text);

Json ToJson(const IntervalPartition& p);
IntervalPartition PartitionFromJson(const Json& j);

// {"type":"block","partition":[...],"values":[[...]]},
// {"type":"grid","n":n,"samples":[[...]]} or
// {"type":"catalog","name":"figure3a","resolution":n} (block average on
// uniform(n), exact). An optional "bound" sets M.
Json ToJson(const BlockKernel& w);
Json ToJson(const GridKernel& w);
Json ToJson(const Kernel& w);
Kernel KernelFromJson(const Json& j);

// {"matrix":[[...]],"weights":[...],"opinions":[...]}; weights default to
// 1/n and opinions are optional.
Json ToJson(const WeightedDeGrootModel& m);
WeightedDeGrootModel ModelFromJson(const Json& j);

// {"groups":[[0],[1,2],...]} or a bare array of arrays.
std::vector<std::vector<int>> GroupsFromJson(const Json& j);

// Values of a function on `part`: an array with one entry per cell or a
// scalar (constant).
StepFunction FunctionFromJson(const Json& j, const IntervalPartition& part);
Json ToJson(const StepFunction& f);  // {"breakpoints":[...],"values":[...]}
Json ValuesJson(const Eigen::VectorXd& v);

Json ToJson(const BoundReport& r);
Json ToJson(const CutNormResult& r);
Json ToJson(const StationaryDensity& s);
Json ToJson(const ConsensusReport& r);

// {"kernel":{...},"operator":"weighted"|"additive","f0":..,"s0":..,
//  "psi1":..,"psi2":..,"b1":..,"b2":..,"delta":..}. Function fields accept
// arrays on the kernel partition or scalars; s0, psi1 and psi2 default to 1.
GameSpec GameSpecFromJson(const Json& j);
Json ToJson(const GameSpec& spec);

// {"s1":[...],"s2":[...]} on the game's kernel partition.
std::pair<StepFunction, StepFunction> ProfileFromJson(
    const Json& j, const IntervalPartition& part);

Json ToJson(const ResidualReport& r);
Json ToJson(const EquilibriumReport& r);

}  // namespace dikernel::io

#endif  // DIKERNEL_IO_H_
