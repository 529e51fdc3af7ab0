#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ordpat {

using Series = std::vector<double>;

/// Row-major block of equally sized vectors (one observation per row).
class VectorSamples {
 public:
  VectorSamples() = default;
  VectorSamples(std::size_t rows, std::size_t dim) : dim_(dim), data_(rows * dim) {}
  VectorSamples(std::size_t dim, std::vector<double> data);

  std::size_t rows() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Values of one coordinate across all rows.
  Series column(std::size_t j) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Overlapping windows (x_i, ..., x_{i+h}) of a series, one per row.
VectorSamples sliding_windows(std::span<const double> series, int h);

}  // namespace ordpat
