#include "sf/matfp.hpp"

#include <stdexcept>

#include "sf/nt.hpp"

namespace sf {

uint32_t fp_inv_scalar(uint32_t p, uint32_t a) {
  a %= p;
  if (a == 0) throw std::domain_error("fp_inv_scalar: zero");
  return static_cast<uint32_t>(nt::powmod(a, p - 2, p));
}

MatFp MatFp::identity(uint32_t p, int n) {
  MatFp I(p, n, n);
  for (int i = 0; i < n; ++i) I.set(i, i, 1);
  return I;
}

void MatFp::set_col(int j, const FpVec& v) {
  for (int i = 0; i < rows_; ++i) a_[i * cols_ + j] = static_cast<uint8_t>(v[i] % p_);
}

FpVec MatFp::col(int j) const {
  FpVec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = a_[i * cols_ + j];
  return v;
}

MatFp MatFp::mul(const MatFp& rhs) const {
  if (cols_ != rhs.rows_ || p_ != rhs.p_) throw std::invalid_argument("MatFp::mul: shape mismatch");
  MatFp r(p_, rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const uint32_t x = a_[i * cols_ + k];
      if (!x) continue;
      for (int j = 0; j < rhs.cols_; ++j) {
        r.a_[i * rhs.cols_ + j] =
            static_cast<uint8_t>((r.a_[i * rhs.cols_ + j] + x * rhs.a_[k * rhs.cols_ + j]) % p_);
      }
    }
  }
  return r;
}

FpVec MatFp::apply(const FpVec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("MatFp::apply: size mismatch");
  FpVec r(rows_, 0);
  for (int j = 0; j < cols_; ++j) {
    const uint32_t x = v[j];
    if (!x) continue;
    for (int i = 0; i < rows_; ++i) {
      r[i] = static_cast<uint8_t>((r[i] + x * a_[i * cols_ + j]) % p_);
    }
  }
  return r;
}

int fp_rank_inplace(uint32_t p, uint8_t* buf, int r, int c) {
  int rank = 0;
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    for (int i = rank; i < r; ++i) {
      if (buf[i * c + col]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int j = col; j < c; ++j) std::swap(buf[piv * c + j], buf[rank * c + j]);
    }
    const uint32_t pinv = fp_inv_scalar(p, buf[rank * c + col]);
    for (int j = col; j < c; ++j)
      buf[rank * c + j] = static_cast<uint8_t>((buf[rank * c + j] * pinv) % p);
    for (int i = 0; i < r; ++i) {
      if (i == rank) continue;
      const uint32_t f = buf[i * c + col];
      if (!f) continue;
      for (int j = col; j < c; ++j) {
        buf[i * c + j] =
            static_cast<uint8_t>((buf[i * c + j] + (p - f) * buf[rank * c + j]) % p);
      }
    }
    ++rank;
  }
  return rank;
}

int MatFp::rank() const {
  std::vector<uint8_t> buf = a_;
  return fp_rank_inplace(p_, buf.data(), rows_, cols_);
}

std::vector<FpVec> MatFp::kernel_basis() const {
  // Reduce to RREF, read off free columns.
  std::vector<uint8_t> buf = a_;
  const int r = rows_, c = cols_;
  std::vector<int> pivot_of_col(c, -1);
  int rank = 0;
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    for (int i = rank; i < r; ++i) {
      if (buf[i * c + col]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < c; ++j) std::swap(buf[piv * c + j], buf[rank * c + j]);
    const uint32_t pinv = fp_inv_scalar(p_, buf[rank * c + col]);
    for (int j = 0; j < c; ++j) buf[rank * c + j] = static_cast<uint8_t>((buf[rank * c + j] * pinv) % p_);
    for (int i = 0; i < r; ++i) {
      if (i == rank) continue;
      const uint32_t f = buf[i * c + col];
      if (!f) continue;
      for (int j = 0; j < c; ++j)
        buf[i * c + j] = static_cast<uint8_t>((buf[i * c + j] + (p_ - f) * buf[rank * c + j]) % p_);
    }
    pivot_of_col[col] = rank;
    ++rank;
  }
  std::vector<FpVec> basis;
  for (int col = 0; col < c; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    FpVec v(c, 0);
    v[col] = 1;
    for (int j = 0; j < c; ++j) {
      if (pivot_of_col[j] < 0) continue;
      const uint32_t coef = buf[pivot_of_col[j] * c + col];
      v[j] = static_cast<uint8_t>((p_ - coef) % p_);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<MatFp> MatFp::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  const int n = rows_;
  std::vector<uint8_t> aug(n * 2 * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i * 2 * n + j] = a_[i * n + j];
    aug[i * 2 * n + n + i] = 1;
  }
  int rank = 0;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = rank; i < n; ++i) {
      if (aug[i * 2 * n + col]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    if (piv != rank)
      for (int j = 0; j < 2 * n; ++j) std::swap(aug[piv * 2 * n + j], aug[rank * 2 * n + j]);
    const uint32_t pinv = fp_inv_scalar(p_, aug[rank * 2 * n + col]);
    for (int j = 0; j < 2 * n; ++j)
      aug[rank * 2 * n + j] = static_cast<uint8_t>((aug[rank * 2 * n + j] * pinv) % p_);
    for (int i = 0; i < n; ++i) {
      if (i == rank) continue;
      const uint32_t f = aug[i * 2 * n + col];
      if (!f) continue;
      for (int j = 0; j < 2 * n; ++j)
        aug[i * 2 * n + j] =
            static_cast<uint8_t>((aug[i * 2 * n + j] + (p_ - f) * aug[rank * 2 * n + j]) % p_);
    }
    ++rank;
  }
  MatFp inv(p_, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.set(i, j, aug[i * 2 * n + n + j]);
  return inv;
}

std::optional<FpVec> MatFp::solve(const FpVec& rhs) const {
  const int r = rows_, c = cols_;
  std::vector<uint8_t> aug(r * (c + 1));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) aug[i * (c + 1) + j] = a_[i * c + j];
    aug[i * (c + 1) + c] = rhs[i];
  }
  const int w = c + 1;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    for (int i = rank; i < r; ++i)
      if (aug[i * w + col]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < w; ++j) std::swap(aug[piv * w + j], aug[rank * w + j]);
    const uint32_t pinv = fp_inv_scalar(p_, aug[rank * w + col]);
    for (int j = 0; j < w; ++j) aug[rank * w + j] = static_cast<uint8_t>((aug[rank * w + j] * pinv) % p_);
    for (int i = 0; i < r; ++i) {
      if (i == rank) continue;
      const uint32_t f = aug[i * w + col];
      if (!f) continue;
      for (int j = 0; j < w; ++j)
        aug[i * w + j] = static_cast<uint8_t>((aug[i * w + j] + (p_ - f) * aug[rank * w + j]) % p_);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int i = rank; i < r; ++i)
    if (aug[i * w + c]) return std::nullopt;
  FpVec x(c, 0);
  for (int i = 0; i < rank; ++i) x[pivot_col[i]] = aug[i * w + c];
  return x;
}

MatFp MatFp::add(const MatFp& rhs) const {
  MatFp r(p_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = static_cast<uint8_t>((a_[i] + rhs.a_[i]) % p_);
  return r;
}

MatFp MatFp::scale(uint32_t c) const {
  MatFp r(p_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = static_cast<uint8_t>((a_[i] * c) % p_);
  return r;
}

FpVec fp_add(uint32_t p, const FpVec& a, const FpVec& b) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<uint8_t>((a[i] + b[i]) % p);
  return r;
}

FpVec fp_sub(uint32_t p, const FpVec& a, const FpVec& b) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<uint8_t>((a[i] + p - b[i]) % p);
  return r;
}

FpVec fp_scale(uint32_t p, const FpVec& a, uint32_t c) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<uint8_t>((a[i] * c) % p);
  return r;
}

bool fp_is_zero(const FpVec& a) {
  for (uint8_t x : a)
    if (x) return false;
  return true;
}

}  // namespace sf
