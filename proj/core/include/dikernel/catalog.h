#ifndef DIKERNEL_CATALOG_H_
#define DIKERNEL_CATALOG_H_

#include <functional>
#include <string>
#include <string_view>

#include "dikernel/kernel.h"

namespace dikernel {

// A closed-form DiKernel from the built-in catalog. Carries its pointwise
// values, exact rectangle integrals (so block discretizations are exact), a
// bound M and piecewise-Lipschitz metadata.
class AnalyticKernel {
 public:
  using ValueFn = std::function<double(double x, double y)>;
  // \int_{x0}^{x1} \int_{y0}^{y1} W(x, y) dy dx.
  using IntegralFn =
      std::function<double(double x0, double x1, double y0, double y1)>;

  AnalyticKernel(std::string name, ValueFn value, IntegralFn integral,
                 LipschitzMeta meta);

  const std::string& name() const { return name_; }
  double operator()(double x, double y) const { return value_(x, y); }
  double Integrate(double x0, double x1, double y0, double y1) const {
    return integral_(x0, x1, y0, y1);
  }
  double bound() const { return meta_.bound; }
  const LipschitzMeta& meta() const { return meta_; }

 private:
  std::string name_;
  ValueFn value_;
  IntegralFn integral_;
  LipschitzMeta meta_;
};

// W(x, y) = 2 where x + y lies within 1/4 of an integer, 0 elsewhere. Every
// row integrates to 1. Block averages over the quarter grid are the integers
// {0, 1, 2}.
AnalyticKernel Figure3aKernel();

// W = 1.
AnalyticKernel ConstantKernel();

// W(x, y) = 1 + a (2x - 1)(2y - 1), |a| <= 1. Row-stochastic and doubly
// stochastic; 2|a|-Lipschitz.
AnalyticKernel BilinearKernel(double a);

// Uni-type kernel W(x, y) = h(y) with h(y) = (k + 1) y^k, k >= 0 an integer
// (k = 1 gives h(y) = 2y).
AnalyticKernel PowerUnitypeKernel(int k);

// lambda * inner + (1 - lambda) * 1.
AnalyticKernel BlendKernel(double lambda, const AnalyticKernel& inner);

// Looks a kernel up by name: "figure3a", "constant", "bilinear:<a>",
// "unitype:<k>", "blend:<lambda>:<inner name>". Throws std::invalid_argument
// for unknown names.
AnalyticKernel CatalogKernel(std::string_view name);

// Midpoint samples on the uniform n x n grid.
GridKernel SampleGrid(const AnalyticKernel& w, int n);

}  // namespace dikernel

#endif  // DIKERNEL_CATALOG_H_
