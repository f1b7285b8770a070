#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsim {

// Named real observables sampled at strictly increasing times (seconds, or
// the caller's dimensionless unit).
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> columns);

  void append(double t, std::span<const double> values);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  bool has_column(std::string_view name) const noexcept;
  std::vector<double> column(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const;
  double back(std::string_view name) const { return at(size() - 1, name); }
  std::span<const double> row(std::size_t r) const;

 private:
  std::size_t column_index(std::string_view name) const;

  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<double> values_;  // row-major
};

}  // namespace hybridsim
