#include "mw/fgab.hpp"

namespace mw::ab {

std::size_t row_count(const Mat& m) { return m.size(); }
std::size_t col_count(const Mat& m) { return m.empty() ? 0 : m[0].size(); }

Mat identity_mat(std::size_t n) {
  Mat m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat zero_mat(std::size_t r, std::size_t c) { return Mat(r, std::vector<Int>(c, 0)); }

Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t r = row_count(a), k = col_count(a), c = col_count(b);
  if (k != row_count(b)) throw AlgebraError("mat_mul: shape mismatch");
  Mat out = zero_mat(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      const Int& ait = a[i][t];
      if (ait == 0) continue;
      for (std::size_t j = 0; j < c; ++j) out[i][j] += ait * b[t][j];
    }
  return out;
}

Mat mat_add(const Mat& a, const Mat& b) {
  if (row_count(a) != row_count(b) || col_count(a) != col_count(b))
    throw AlgebraError("mat_add: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < row_count(a); ++i)
    for (std::size_t j = 0; j < col_count(a); ++j) out[i][j] += b[i][j];
  return out;
}

Mat mat_scale(const Int& c, const Mat& a) {
  Mat out = a;
  for (auto& row : out)
    for (auto& x : row) x *= c;
  return out;
}

Mat transpose(const Mat& a) {
  Mat out = zero_mat(col_count(a), row_count(a));
  for (std::size_t i = 0; i < row_count(a); ++i)
    for (std::size_t j = 0; j < col_count(a); ++j) out[j][i] = a[i][j];
  return out;
}

Mat hconcat(const Mat& a, const Mat& b) {
  std::size_t ra = row_count(a), rb = row_count(b);
  if (ra == 0) return b;
  if (rb == 0) return a;
  if (ra != rb) throw AlgebraError("hconcat: row mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < ra; ++i)
    out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

// Bareiss fraction-free elimination; exact over Z.
Int determinant(Mat a) {
  std::size_t n = row_count(a);
  if (n != col_count(a)) throw AlgebraError("determinant: not square");
  if (n == 0) return 1;
  Int prev = 1, sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool is_unimodular(const Mat& a) {
  if (row_count(a) != col_count(a)) return false;
  Int d = determinant(a);
  return d == 1 || d == -1;
}

namespace {

struct Worker {
  Mat a, left, right, linv, rinv;
  std::size_t r, c;

  explicit Worker(const Mat& m)
      : a(m), left(identity_mat(row_count(m))), right(identity_mat(col_count(m))),
        linv(left), rinv(right), r(row_count(m)), c(col_count(m)) {}

  void row_swap(std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(left[i], left[j]);
    for (std::size_t t = 0; t < r; ++t) std::swap(linv[t][i], linv[t][j]);
  }
  void col_swap(std::size_t i, std::size_t j) {
    for (std::size_t t = 0; t < r; ++t) std::swap(a[t][i], a[t][j]);
    for (std::size_t t = 0; t < c; ++t) std::swap(right[t][i], right[t][j]);
    std::swap(rinv[i], rinv[j]);
  }
  void row_addmul(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t t = 0; t < c; ++t) a[dst][t] += q * a[src][t];
    for (std::size_t t = 0; t < r; ++t) left[dst][t] += q * left[src][t];
    for (std::size_t t = 0; t < r; ++t) linv[t][src] -= q * linv[t][dst];
  }
  void col_addmul(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t t = 0; t < r; ++t) a[t][dst] += q * a[t][src];
    for (std::size_t t = 0; t < c; ++t) right[t][dst] += q * right[t][src];
    for (std::size_t t = 0; t < c; ++t) rinv[src][t] -= q * rinv[dst][t];
  }
  void row_negate(std::size_t i) {
    for (std::size_t t = 0; t < c; ++t) a[i][t] = -a[i][t];
    for (std::size_t t = 0; t < r; ++t) left[i][t] = -left[i][t];
    for (std::size_t t = 0; t < r; ++t) linv[t][i] = -linv[t][i];
  }

  // smallest |entry| != 0 in the submatrix starting at (k,k)
  bool pick_pivot(std::size_t k, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best = 0;
    for (std::size_t i = k; i < r; ++i)
      for (std::size_t j = k; j < c; ++j) {
        if (a[i][j] == 0) continue;
        Int v = abs(a[i][j]);
        if (!found || v < best) {
          best = v;
          pi = i;
          pj = j;
          found = true;
        }
      }
    return found;
  }

  void run() {
    std::size_t n = std::min(r, c);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t pi = 0, pj = 0;
      if (!pick_pivot(k, pi, pj)) break;
      if (pi != k) row_swap(pi, k);
      if (pj != k) col_swap(pj, k);
      for (;;) {
        // clear column k below the pivot via Euclid steps
        bool dirty = false;
        for (std::size_t i = k + 1; i < r; ++i) {
          if (a[i][k] == 0) continue;
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), a[i][k].get_mpz_t(), a[k][k].get_mpz_t());
          row_addmul(i, k, -q);
          if (a[i][k] != 0) {  // remainder smaller than pivot: promote it
            row_swap(i, k);
            dirty = true;
          }
        }
        if (dirty) continue;
        for (std::size_t j = k + 1; j < c; ++j) {
          if (a[k][j] == 0) continue;
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), a[k][j].get_mpz_t(), a[k][k].get_mpz_t());
          col_addmul(j, k, -q);
          if (a[k][j] != 0) {
            col_swap(j, k);
            dirty = true;
            break;  // column ops may have dirtied column k; restart
          }
        }
        if (dirty) continue;
        // pivot must divide every remaining entry for the divisor chain
        bool fixed = true;
        for (std::size_t i = k + 1; i < r && fixed; ++i)
          for (std::size_t j = k + 1; j < c && fixed; ++j)
            if (a[i][j] % a[k][k] != 0) {
              row_addmul(k, i, 1);
              fixed = false;
            }
        if (fixed) break;
      }
      if (a[k][k] < 0) row_negate(k);
    }
  }
};

}  // namespace

Snf smith_normal_form(const Mat& a) {
  Worker w(a);
  w.run();
  return Snf{w.a, w.left, w.right, w.linv, w.rinv};
}

Mat lattice_basis(const Mat& a) {
  Snf s = smith_normal_form(a);
  Mat ar = mat_mul(a, s.right);
  Mat out(row_count(a));
  for (std::size_t j = 0; j < col_count(ar); ++j) {
    bool nonzero = false;
    for (std::size_t i = 0; i < row_count(ar); ++i)
      if (ar[i][j] != 0) nonzero = true;
    if (!nonzero) continue;
    for (std::size_t i = 0; i < row_count(ar); ++i) out[i].push_back(ar[i][j]);
  }
  return out;
}

std::optional<std::vector<Int>> lattice_solve(const Mat& u, const std::vector<Int>& v) {
  std::size_t n = row_count(u), k = col_count(u);
  if (v.size() != n) throw AlgebraError("lattice_solve: shape mismatch");
  Snf s = smith_normal_form(u);
  // u*c = v  <=>  d*(right^-1 c) = left*v; then c = right*y
  std::size_t diag = std::min(n, k);
  std::vector<Int> lv(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lv[i] += s.left[i][j] * v[j];
  std::vector<Int> y(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Int di = (i < diag) ? s.d[i][i] : Int(0);
    if (di == 0) {
      if (lv[i] != 0) return std::nullopt;
    } else {
      if (lv[i] % di != 0) return std::nullopt;
      y[i] = lv[i] / di;
    }
  }
  std::vector<Int> cvec(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) cvec[i] += s.right[i][j] * y[j];
  return cvec;
}

Mat integer_kernel(const Mat& a) {
  std::size_t n = col_count(a);
  if (n == 0) return Mat{};
  Snf s = smith_normal_form(a);
  std::size_t diag = std::min(row_count(a), n);
  Mat out(n);
  for (std::size_t j = 0; j < n; ++j) {
    bool in_kernel = j >= diag || s.d[j][j] == 0;
    if (!in_kernel) continue;
    for (std::size_t i = 0; i < n; ++i) out[i].push_back(s.right[i][j]);
  }
  if (out[0].empty() && n > 0) return Mat(n);  // keep row count, zero columns
  return out;
}

bool lattice_eq(const Mat& a, const Mat& b) {
  if (row_count(a) != row_count(b)) return false;
  Mat ba = lattice_basis(a), bb = lattice_basis(b);
  auto contained = [](const Mat& big, const Mat& small) {
    for (std::size_t j = 0; j < col_count(small); ++j) {
      std::vector<Int> v(row_count(small));
      for (std::size_t i = 0; i < row_count(small); ++i) v[i] = small[i][j];
      if (!lattice_solve(big, v)) return false;
    }
    return true;
  };
  return contained(ba, bb) && contained(bb, ba);
}

}  // namespace mw::ab
