#ifndef ONELAP_GAUSS_HPP_
#define ONELAP_GAUSS_HPP_

#include <array>
#include <functional>

namespace onelap {

/// 8-point Gauss-Legendre rule; exact through polynomial degree 15.
template <typename F>
double gauss8(const F& f, double a, double b) {
  static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290,
                                              0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    s += w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
  return s * half;
}

/// Composite rule over the intervals of a sorted node vector.
template <typename F>
double gauss8_over(const std::vector<double>& nodes, const F& f) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) s += gauss8(f, nodes[j], nodes[j + 1]);
  return s;
}

}  // namespace onelap

#endif
