#include "dikernel/catalog.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dikernel {
namespace {

// \int_{x0}^{x1} clamp(c - x - y0, 0, h) dx with h = y1 - y0, i.e. the area
// of {(x, y) in the rectangle : x + y < c}.
double AreaBelowDiagonal(double c, double x0, double x1, double y0,
                         double y1) {
  const double h = y1 - y0;
  auto antiderivative = [&](double z) {
    if (z <= 0.0) return 0.0;
    if (z <= h) return 0.5 * z * z;
    return 0.5 * h * h + h * (z - h);
  };
  // Substituting z = c - y0 - x flips the orientation.
  return antiderivative(c - y0 - x0) - antiderivative(c - y0 - x1);
}

double ParseDouble(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("catalog: bad " + std::string(what) + " '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

AnalyticKernel::AnalyticKernel(std::string name, ValueFn value,
                               IntegralFn integral, LipschitzMeta meta)
    : name_(std::move(name)),
      value_(std::move(value)),
      integral_(std::move(integral)),
      meta_(std::move(meta)) {}

AnalyticKernel Figure3aKernel() {
  auto value = [](double x, double y) {
    double s = x + y;
    // Jump lines carry the mean of both sides so that midpoint samples
    // landing on them stay unbiased.
    if (s == 0.25 || s == 0.75 || s == 1.25 || s == 1.75) return 1.0;
    bool shaded = s < 0.25 || (s > 0.75 && s < 1.25) || s > 1.75;
    return shaded ? 2.0 : 0.0;
  };
  auto integral = [](double x0, double x1, double y0, double y1) {
    double area = 0.0;
    for (int k = 0; k <= 2; ++k) {
      area += AreaBelowDiagonal(k + 0.25, x0, x1, y0, y1) -
              AreaBelowDiagonal(k - 0.25, x0, x1, y0, y1);
    }
    return 2.0 * area;
  };
  // Constant off the four anti-diagonal discontinuities; the quarter grid is
  // the piece partition used for the partition bound.
  LipschitzMeta meta{0.0, IntervalPartition::Uniform(4), 2.0};
  return AnalyticKernel("figure3a", value, integral, meta);
}

AnalyticKernel ConstantKernel() {
  return AnalyticKernel(
      "constant", [](double, double) { return 1.0; },
      [](double x0, double x1, double y0, double y1) {
        return (x1 - x0) * (y1 - y0);
      },
      LipschitzMeta{0.0, IntervalPartition::Uniform(1), 1.0});
}

AnalyticKernel BilinearKernel(double a) {
  if (!(std::abs(a) <= 1.0)) {
    throw std::invalid_argument("bilinear kernel needs |a| <= 1");
  }
  auto value = [a](double x, double y) {
    return 1.0 + a * (2.0 * x - 1.0) * (2.0 * y - 1.0);
  };
  auto integral = [a](double x0, double x1, double y0, double y1) {
    // \int (2x - 1) dx = x^2 - x.
    double gx = (x1 * x1 - x1) - (x0 * x0 - x0);
    double gy = (y1 * y1 - y1) - (y0 * y0 - y0);
    return (x1 - x0) * (y1 - y0) + a * gx * gy;
  };
  LipschitzMeta meta{2.0 * std::abs(a), IntervalPartition::Uniform(1),
                     1.0 + std::abs(a)};
  return AnalyticKernel("bilinear:" + std::to_string(a), value, integral, meta);
}

AnalyticKernel PowerUnitypeKernel(int k) {
  if (k < 0) throw std::invalid_argument("unitype power must be >= 0");
  auto value = [k](double, double y) { return (k + 1) * std::pow(y, k); };
  auto integral = [k](double x0, double x1, double y0, double y1) {
    return (x1 - x0) * (std::pow(y1, k + 1) - std::pow(y0, k + 1));
  };
  LipschitzMeta meta{static_cast<double>(k) * (k + 1),
                     IntervalPartition::Uniform(1),
                     std::max(1.0, static_cast<double>(k + 1))};
  return AnalyticKernel("unitype:" + std::to_string(k), value, integral, meta);
}

AnalyticKernel BlendKernel(double lambda, const AnalyticKernel& inner) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("blend weight must lie in [0, 1]");
  }
  auto value = [lambda, inner](double x, double y) {
    return lambda * inner(x, y) + (1.0 - lambda);
  };
  auto integral = [lambda, inner](double x0, double x1, double y0, double y1) {
    return lambda * inner.Integrate(x0, x1, y0, y1) +
           (1.0 - lambda) * (x1 - x0) * (y1 - y0);
  };
  LipschitzMeta meta{lambda * inner.meta().theta, inner.meta().pieces,
                     std::max(1.0, lambda * inner.bound() + (1.0 - lambda))};
  return AnalyticKernel("blend:" + std::to_string(lambda) + ":" + inner.name(),
                        value, integral, meta);
}

AnalyticKernel CatalogKernel(std::string_view name) {
  if (name == "figure3a") return Figure3aKernel();
  if (name == "constant") return ConstantKernel();
  auto colon = name.find(':');
  if (colon != std::string_view::npos) {
    std::string_view head = name.substr(0, colon);
    std::string_view rest = name.substr(colon + 1);
    if (head == "bilinear") return BilinearKernel(ParseDouble(rest, "a"));
    if (head == "unitype") {
      double k = ParseDouble(rest, "power");
      if (k != std::floor(k)) {
        throw std::invalid_argument("unitype power must be an integer");
      }
      return PowerUnitypeKernel(static_cast<int>(k));
    }
    if (head == "blend") {
      auto second = rest.find(':');
      if (second == std::string_view::npos) {
        throw std::invalid_argument("blend needs 'blend:<lambda>:<inner>'");
      }
      return BlendKernel(ParseDouble(rest.substr(0, second), "lambda"),
                         CatalogKernel(rest.substr(second + 1)));
    }
  }
  throw std::invalid_argument("unknown catalog kernel '" + std::string(name) +
                              "'");
}

GridKernel SampleGrid(const AnalyticKernel& w, int n) {
  if (n < 1) throw std::invalid_argument("grid size must be >= 1");
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      s(i, j) = w((i + 0.5) / n, (j + 0.5) / n);
    }
  }
  return GridKernel(std::move(s), w.bound());
}

}  // namespace dikernel
