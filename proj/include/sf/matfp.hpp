#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sf {

using FpVec = std::vector<uint8_t>;

// Dense matrix over F_p with exact Gaussian elimination.
class MatFp {
 public:
  MatFp() = default;
  MatFp(uint32_t p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static MatFp identity(uint32_t p, int n);

  uint32_t p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  uint8_t at(int i, int j) const { return a_[i * cols_ + j]; }
  void set(int i, int j, uint32_t v) { a_[i * cols_ + j] = static_cast<uint8_t>(v % p_); }
  void set_col(int j, const FpVec& v);
  FpVec col(int j) const;

  MatFp mul(const MatFp& rhs) const;
  FpVec apply(const FpVec& v) const;

  int rank() const;
  std::vector<FpVec> kernel_basis() const;
  std::optional<MatFp> inverse() const;
  // One solution of A x = rhs, or nullopt when inconsistent.
  std::optional<FpVec> solve(const FpVec& rhs) const;
  bool invertible() const { return rows_ == cols_ && rank() == rows_; }

  MatFp add(const MatFp& rhs) const;
  MatFp scale(uint32_t c) const;

  bool operator==(const MatFp& o) const { return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  const std::vector<uint8_t>& data() const { return a_; }

 private:
  uint32_t p_ = 0;
  int rows_ = 0, cols_ = 0;
  std::vector<uint8_t> a_;
};

// F_p vector helpers.
FpVec fp_add(uint32_t p, const FpVec& a, const FpVec& b);
FpVec fp_sub(uint32_t p, const FpVec& a, const FpVec& b);
FpVec fp_scale(uint32_t p, const FpVec& a, uint32_t c);
bool fp_is_zero(const FpVec& a);

// Rank of an r x c byte matrix given row-major; in-place destructive helper
// suitable for hot loops (buf has r*c entries).
int fp_rank_inplace(uint32_t p, uint8_t* buf, int r, int c);

// Multiplicative inverse mod a small prime.
uint32_t fp_inv_scalar(uint32_t p, uint32_t a);

}  // namespace sf
