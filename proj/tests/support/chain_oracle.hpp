// Test-only reference: solves the absorbing birth-death chain by dense
// Gaussian elimination on the interior states, independent of the closed
// forms under test.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crowdplay::testing {

struct ChainSolution {
  double p_win;
  double expected_steps;
};

namespace detail {

// Solves A x = b in place for each right-hand side column in `rhs`.
inline void gauss_solve(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& rhs) {
  const std::size_t k = a.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular chain system");
    std::swap(a[col], a[pivot]);
    for (auto& b : rhs) std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) a[r][c] -= f * a[col][c];
      for (auto& b : rhs) b[r] -= f * b[col];
    }
  }
  for (auto& b : rhs) {
    for (std::size_t i = k; i-- > 0;) {
      double s = b[i];
      for (std::size_t c = i + 1; c < k; ++c) s -= a[i][c] * b[c];
      b[i] = s / a[i][i];
    }
  }
}

}  // namespace detail

/// Hitting probability of +n before -m and mean absorption time from 0 for
/// a +1/-1 walk with up-probability p.
inline ChainSolution solve_absorbing_chain(double p, int n, int m) {
  const int k = n + m - 1;  // interior states -m+1 .. n-1
  std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> rhs(2, std::vector<double>(k, 0.0));
  auto index = [m](int state) { return static_cast<std::size_t>(state + m - 1); };
  for (int s = -m + 1; s <= n - 1; ++s) {
    const std::size_t i = index(s);
    a[i][i] = 1.0;
    rhs[1][i] = 1.0;  // one step from here
    if (s + 1 == n) {
      rhs[0][i] += p;
    } else {
      a[i][index(s + 1)] -= p;
    }
    if (s - 1 != -m) a[i][index(s - 1)] -= 1.0 - p;
  }
  detail::gauss_solve(std::move(a), rhs);
  return {rhs[0][index(0)], rhs[1][index(0)]};
}

}  // namespace crowdplay::testing
