#pragma once
// Multilinear algebra for the determinant lemmas: the minor-matrix identity,
// the wedge expansion of symmetric tensor squares, and the rank-1-sum
// determinant expansion. Templated so the lemma checks run in exact rational
// or Gaussian-rational arithmetic; complex instantiations serve as adapters.

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace thetaver {

template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int r, int c) : r_(r), c_(c), d_(static_cast<std::size_t>(r) * c) {}
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  int rows() const { return r_; }
  int cols() const { return c_; }
  T& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> d_;
};

// Cofactor-expansion determinant; division-free, fine for n <= 8.
template <typename T>
T det(const Mat<T>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("det: square matrix required");
  if (n == 0) return T(1);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  T total = T(0);
  Mat<T> sub(n - 1, n - 1);
  for (int c = 0; c < n; ++c) {
    for (int i = 1; i < n; ++i) {
      int sc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        sub(i - 1, sc++) = a(i, j);
      }
    }
    const T term = a(0, c) * det(sub);
    if (c % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

// (g-1)x(g-1) matrix of the 2x2 minors on rows {1,i}, columns {1,j}.
template <typename T>
Mat<T> tilde_matrix(const Mat<T>& a) {
  const int g = a.rows();
  if (g != a.cols() || g < 2) throw std::invalid_argument("tilde_matrix: square with g >= 2");
  Mat<T> t(g - 1, g - 1);
  for (int i = 1; i < g; ++i)
    for (int j = 1; j < g; ++j) t(i - 1, j - 1) = a(0, 0) * a(i, j) - a(0, j) * a(i, 0);
  return t;
}

namespace detail {

template <typename T>
T gram_det_of_columns(const std::vector<std::vector<T>>& vs, const std::vector<int>& cols) {
  const int g = static_cast<int>(cols.size());
  Mat<T> m(g, g);
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < g; ++i) m(i, j) = vs[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])][static_cast<std::size_t>(i)];
  return det(m);
}

inline int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace detail

// Edge blocks of the complete graph K_{g+1} under the lexicographic edge
// labeling: label t runs over pairs (a,b), a<b, in lex order, and block v
// collects the labels of edges incident to vertex v, ascending. This is the
// index pattern of the permutation-sum side of the symmetric-square wedge
// identity: g+1 determinant factors, every vector appearing exactly twice,
// no pair of vectors sharing two factors.
inline std::vector<std::vector<int>> lemma2_blocks(int g) {
  const int verts = g + 1;
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(verts));
  int label = 0;
  for (int a = 0; a < verts; ++a)
    for (int b = a + 1; b < verts; ++b) {
      blocks[static_cast<std::size_t>(a)].push_back(label);
      blocks[static_cast<std::size_t>(b)].push_back(label);
      ++label;
    }
  return blocks;
}

// Wedge of symmetric squares as the determinant of the N x N matrix whose
// rows are the plain-product coordinates (v_i v_j, i <= j). N = g(g+1)/2.
template <typename T>
T sym_square_wedge(const std::vector<std::vector<T>>& family) {
  if (family.empty()) throw std::invalid_argument("sym_square_wedge: empty family");
  const int g = static_cast<int>(family[0].size());
  const int n = g * (g + 1) / 2;
  if (static_cast<int>(family.size()) != n)
    throw std::invalid_argument("sym_square_wedge: need g(g+1)/2 vectors of dimension g");
  Mat<T> m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& v = family[static_cast<std::size_t>(r)];
    if (static_cast<int>(v.size()) != g)
      throw std::invalid_argument("sym_square_wedge: dimension mismatch");
    int c = 0;
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j, ++c) m(r, c) = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  }
  return det(m);
}

// Signed sum over S_N of products of g x g minors following lemma2_blocks.
// Brute force (N! terms); the independent route against sym_square_wedge.
template <typename T>
T lemma2_permutation_sum(const std::vector<std::vector<T>>& family) {
  const int g = static_cast<int>(family[0].size());
  const int n = g * (g + 1) / 2;
  if (static_cast<int>(family.size()) != n)
    throw std::invalid_argument("lemma2_permutation_sum: need g(g+1)/2 vectors");
  const auto blocks = lemma2_blocks(g);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  T total = T(0);
  do {
    T prod = T(1);
    for (const auto& block : blocks) {
      std::vector<int> cols;
      cols.reserve(block.size());
      for (int label : block) cols.push_back(perm[static_cast<std::size_t>(label)]);
      prod *= detail::gram_det_of_columns(family, cols);
    }
    if (detail::permutation_sign(perm) > 0)
      total += prod;
    else
      total -= prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

namespace detail {

inline bool approx_equal(const std::complex<double>& a, const std::complex<double>& b) {
  const double s = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= 1e-10 * s;
}

template <typename T>
bool values_agree(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, std::complex<double>>)
    return approx_equal(a, b);
  else
    return a == b;
}

}  // namespace detail

// det(sum_k c_k v_k tv_k) evaluated two ways: directly and by the expansion
// over g-subsets sum c_{k1}...c_{kg} (v_{k1} ^ ... ^ v_{kg})^2. Disagreement
// of the two routes is an internal error.
template <typename T>
T rank1_sum_det(const std::vector<T>& coeffs, const std::vector<std::vector<T>>& vectors) {
  if (coeffs.size() != vectors.size())
    throw std::invalid_argument("rank1_sum_det: list length mismatch");
  if (vectors.empty()) throw std::invalid_argument("rank1_sum_det: empty input");
  const int g = static_cast<int>(vectors[0].size());
  const int n = static_cast<int>(vectors.size());
  Mat<T> m(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) m(i, j) = T(0);
  for (int k = 0; k < n; ++k) {
    const auto& v = vectors[static_cast<std::size_t>(k)];
    if (static_cast<int>(v.size()) != g)
      throw std::invalid_argument("rank1_sum_det: dimension mismatch");
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        m(i, j) += coeffs[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  }
  const T direct = det(m);

  T expansion = T(0);
  if (n >= g) {
    std::vector<int> idx(static_cast<std::size_t>(g));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      T cprod = T(1);
      for (int i : idx) cprod *= coeffs[static_cast<std::size_t>(i)];
      const T w = detail::gram_det_of_columns(vectors, idx);
      expansion += cprod * w * w;
      int k = g - 1;
      while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - g + k) --k;
      if (k < 0) break;
      ++idx[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < g; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  if (!detail::values_agree(direct, expansion))
    throw std::logic_error("rank1_sum_det: direct determinant and subset expansion disagree");
  return direct;
}

}  // namespace thetaver
