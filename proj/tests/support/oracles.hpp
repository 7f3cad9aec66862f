// Test-only reference implementations. Nothing here calls into the library's
// matching code paths, so they can serve as independent checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

using Lists = std::vector<std::vector<std::uint32_t>>;
using Wives = std::vector<int>;  // per man, -1 when single

inline int position(const std::vector<std::uint32_t>& list, std::uint32_t x) {
  const auto it = std::find(list.begin(), list.end(), x);
  return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

/// Textbook definition: (m, w) blocks when both strictly prefer each other to
/// their partners. Linear list scans, no inverse tables. `acceptable(w, m)`
/// restricts which men a woman may pair with.
template <typename Acceptable>
std::vector<std::pair<int, int>> blocking_pairs(const Lists& men, const Lists& women,
                                                const Wives& wife, Acceptable acceptable) {
  const int n = static_cast<int>(men.size());
  std::vector<int> husband(n, -1);
  for (int m = 0; m < n; ++m) {
    if (wife[m] >= 0) husband[wife[m]] = m;
  }
  std::vector<std::pair<int, int>> out;
  for (int m = 0; m < n; ++m) {
    for (int w = 0; w < n; ++w) {
      if (wife[m] == w || !acceptable(w, m)) continue;
      const bool man_wants = wife[m] < 0 || position(men[m], w) < position(men[m], wife[m]);
      const bool woman_wants =
          husband[w] < 0 || position(women[w], m) < position(women[w], husband[w]);
      if (man_wants && woman_wants) out.emplace_back(m, w);
    }
  }
  return out;
}

inline std::vector<std::pair<int, int>> blocking_pairs(const Lists& men, const Lists& women,
                                                       const Wives& wife) {
  return blocking_pairs(men, women, wife, [](int, int) { return true; });
}

/// Round-based Gale-Shapley: every free man proposes simultaneously each
/// round. Woman w accepts only men in allowed[w] (all men when empty).
inline Wives gale_shapley_rounds(const Lists& men, const Lists& women,
                                 const std::vector<std::vector<bool>>& allowed = {}) {
  const int n = static_cast<int>(men.size());
  std::vector<std::size_t> next(n, 0);
  std::vector<int> husband(n, -1);
  Wives wife(n, -1);
  for (;;) {
    std::vector<std::vector<int>> offers(n);
    bool any = false;
    for (int m = 0; m < n; ++m) {
      if (wife[m] >= 0 || next[m] >= men[m].size()) continue;
      offers[men[m][next[m]++]].push_back(m);
      any = true;
    }
    if (!any) break;
    for (int w = 0; w < n; ++w) {
      for (int m : offers[w]) {
        if (!allowed.empty() && !allowed[w][m]) continue;
        if (husband[w] < 0 || position(women[w], m) < position(women[w], husband[w])) {
          if (husband[w] >= 0) wife[husband[w]] = -1;
          husband[w] = m;
          wife[m] = w;
        }
      }
    }
  }
  return wife;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Asymptotic two-sample KS rejection threshold at level alpha.
inline double ks_critical(double alpha, std::size_t n1, std::size_t n2) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(static_cast<double>(n1 + n2) / (static_cast<double>(n1) * n2));
}

/// Pearson chi-square goodness of fit against equal expected counts; true
/// when uniformity is not rejected at level alpha.
inline bool chi_square_uniform(const std::vector<std::size_t>& counts, double alpha) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / counts.size();
  double stat = 0.0;
  for (std::size_t c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return stat <= boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace oracle
