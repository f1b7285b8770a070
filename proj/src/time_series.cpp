#include "hybridsim/time_series.hpp"

#include <algorithm>
#include <stdexcept>

namespace hybridsim {

TimeSeries::TimeSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (columns_[i] == columns_[j]) throw std::invalid_argument("TimeSeries: duplicate column " + columns_[i]);
    }
  }
}

void TimeSeries::append(double t, std::span<const double> values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("TimeSeries: record has wrong number of values");
  if (!times_.empty() && !(t > times_.back())) throw std::invalid_argument("TimeSeries: times must increase strictly");
  times_.push_back(t);
  values_.insert(values_.end(), values.begin(), values.end());
}

bool TimeSeries::has_column(std::string_view name) const noexcept {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t TimeSeries::column_index(std::string_view name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::invalid_argument("TimeSeries: unknown column " + std::string(name));
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> TimeSeries::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out(times_.size());
  for (std::size_t r = 0; r < times_.size(); ++r) out[r] = values_[r * columns_.size() + c];
  return out;
}

double TimeSeries::at(std::size_t row, std::string_view name) const {
  if (row >= times_.size()) throw std::out_of_range("TimeSeries: row out of range");
  return values_[row * columns_.size() + column_index(name)];
}

std::span<const double> TimeSeries::row(std::size_t r) const {
  if (r >= times_.size()) throw std::out_of_range("TimeSeries: row out of range");
  return {values_.data() + r * columns_.size(), columns_.size()};
}

}  // namespace hybridsim
