#include "ordpat/samples.hpp"

#include <string>

#include "ordpat/error.hpp"

namespace ordpat {

VectorSamples::VectorSamples(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw Error(ErrorKind::InvalidInput, "sample buffer is not a whole number of rows");
  }
}

Series VectorSamples::column(std::size_t j) const {
  Series out(rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * dim_ + j];
  return out;
}

VectorSamples sliding_windows(std::span<const double> series, int h) {
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  const auto width = static_cast<std::size_t>(h) + 1;
  if (series.size() < width) {
    throw Error(ErrorKind::InsufficientData,
                "series of length " + std::to_string(series.size()) + " has no window of width " +
                    std::to_string(width));
  }
  const std::size_t m = series.size() - width + 1;
  VectorSamples out(m, width);
  for (std::size_t i = 0; i < m; ++i) {
    auto r = out.row(i);
    for (std::size_t k = 0; k < width; ++k) r[k] = series[i + k];
  }
  return out;
}

}  // namespace ordpat
