#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace slicemax::detail {

inline constexpr double kNoCandidate = -std::numeric_limits<double>::infinity();

/// Monotone-queue maximum over a sliding range of anchors.
///
/// `values[i * stride]` holds the value of the window anchored at lo + i, for
/// anchors lo..hi. For every position x in [x0, x1] writes to
/// `out[(x - x0) * out_stride]` the maximum over anchors a with
/// max(lo, x - extent + 1) <= a <= min(hi, x), or kNoCandidate when that range
/// is empty. Linear in (hi - lo) + (x1 - x0).
inline void sliding_max(const double* values, std::ptrdiff_t stride, std::ptrdiff_t lo,
                        std::ptrdiff_t hi, std::ptrdiff_t extent, std::ptrdiff_t x0,
                        std::ptrdiff_t x1, double* out, std::ptrdiff_t out_stride,
                        std::vector<std::ptrdiff_t>& queue) {
  queue.resize(static_cast<std::size_t>(hi - lo + 2 > 0 ? hi - lo + 2 : 1));
  std::size_t head = 0, tail = 0;
  auto value = [&](std::ptrdiff_t a) { return values[(a - lo) * stride]; };
  std::ptrdiff_t next = x0 - extent + 1 > lo ? x0 - extent + 1 : lo;
  for (std::ptrdiff_t x = x0; x <= x1; ++x) {
    const std::ptrdiff_t last = x < hi ? x : hi;
    for (; next <= last; ++next) {
      const double v = value(next);
      while (tail > head && value(queue[tail - 1]) <= v) --tail;
      queue[tail++] = next;
    }
    while (tail > head && queue[head] < x - extent + 1) ++head;
    out[(x - x0) * out_stride] = tail > head ? value(queue[head]) : kNoCandidate;
  }
}

/// Per-scale table of window values over an anchor rectangle, folded into a
/// running per-cell maximum over the output rectangle
/// [out_row0, out_row0 + out_rows) x [out_col0, out_col0 + out_cols).
struct WindowMaxScatter {
  std::ptrdiff_t out_row0 = 0, out_col0 = 0, out_rows = 0, out_cols = 0;
  std::vector<double> best;  // out_rows * out_cols, row-major

  WindowMaxScatter(std::ptrdiff_t row0, std::ptrdiff_t col0, std::ptrdiff_t rows, std::ptrdiff_t cols)
      : out_row0(row0), out_col0(col0), out_rows(rows), out_cols(cols),
        best(static_cast<std::size_t>(rows * cols), kNoCandidate) {}

  /// `values` is (row_hi - row_lo + 1) x (col_hi - col_lo + 1), row-major, for
  /// windows of row_extent x col_extent cells.
  void fold(const std::vector<double>& values, std::ptrdiff_t row_lo, std::ptrdiff_t row_hi,
            std::ptrdiff_t col_lo, std::ptrdiff_t col_hi, std::ptrdiff_t row_extent,
            std::ptrdiff_t col_extent) {
    const std::ptrdiff_t nra = row_hi - row_lo + 1;
    const std::ptrdiff_t nca = col_hi - col_lo + 1;
    if (nra <= 0 || nca <= 0) return;
    // Columns first: per anchor row, max over anchor columns covering each output column.
    tmp_.assign(static_cast<std::size_t>(nra * out_cols), kNoCandidate);
    for (std::ptrdiff_t i = 0; i < nra; ++i)
      sliding_max(values.data() + i * nca, 1, col_lo, col_hi, col_extent, out_col0,
                  out_col0 + out_cols - 1, tmp_.data() + i * out_cols, 1, queue_);
    // Then rows, per output column.
    col_.assign(static_cast<std::size_t>(out_rows), kNoCandidate);
    for (std::ptrdiff_t c = 0; c < out_cols; ++c) {
      sliding_max(tmp_.data() + c, out_cols, row_lo, row_hi, row_extent, out_row0,
                  out_row0 + out_rows - 1, col_.data(), 1, queue_);
      for (std::ptrdiff_t r = 0; r < out_rows; ++r) {
        double& b = best[static_cast<std::size_t>(r * out_cols + c)];
        if (col_[static_cast<std::size_t>(r)] > b) b = col_[static_cast<std::size_t>(r)];
      }
    }
  }

 private:
  std::vector<double> tmp_;
  std::vector<double> col_;
  std::vector<std::ptrdiff_t> queue_;
};

}  // namespace slicemax::detail
