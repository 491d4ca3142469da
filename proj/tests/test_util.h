#ifndef GRAPHCOV_TESTS_TEST_UTIL_H_
#define GRAPHCOV_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/graph.h"
#include "graphcov/rng.h"

namespace graphcov {
namespace testing {

inline Matrix random_gaussian(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

// Haar-like random orthogonal matrix from the QR of a Gaussian matrix.
inline Matrix random_orthogonal(int n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
  Matrix q = qr.householderQ();
  return q;
}

inline SpectralBasis basis_from(const Matrix& u) {
  SpectralBasis basis;
  basis.eigvecs = u.cast<Complex>();
  basis.eigvals = Vector::LinSpaced(u.cols(), 0.0, 1.0);
  basis.distinct = true;
  return basis;
}

inline Vector random_uniform(int n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * rng.uniform();
  return v;
}

// Random subset of {0..n-1} with k elements, ascending.
inline std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(n - i));
    std::swap(all[i], all[j]);
  }
  std::vector<int> out(all.begin(), all.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace testing
}  // namespace graphcov

#endif  // GRAPHCOV_TESTS_TEST_UTIL_H_
