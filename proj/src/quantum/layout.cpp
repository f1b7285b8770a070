#include "hybridsim/quantum/layout.hpp"

#include <algorithm>
#include <stdexcept>

namespace hybridsim::quantum {

HilbertLayout::HilbertLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) throw std::invalid_argument("HilbertLayout: no subsystems");
  total_dim_ = 1;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    const auto& s = subsystems_[i];
    if (s.dimension < 1) throw std::invalid_argument("HilbertLayout: subsystem '" + s.label + "' has dimension 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (subsystems_[j].label == s.label) throw std::invalid_argument("HilbertLayout: duplicate label '" + s.label + "'");
    }
    total_dim_ *= s.dimension;
  }
}

bool HilbertLayout::contains(std::string_view label) const noexcept {
  return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.label == label; });
}

std::size_t HilbertLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw std::invalid_argument("HilbertLayout: unknown subsystem '" + std::string(label) + "' in " + describe());
}

std::size_t HilbertLayout::stride(std::size_t subsystem) const {
  std::size_t s = 1;
  for (std::size_t i = subsystem + 1; i < subsystems_.size(); ++i) s *= subsystems_[i].dimension;
  return s;
}

HilbertLayout HilbertLayout::restricted(const std::vector<std::string>& keep) const {
  for (const auto& label : keep) index_of(label);
  std::vector<Subsystem> kept;
  for (const auto& s : subsystems_) {
    if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) kept.push_back(s);
  }
  return HilbertLayout(std::move(kept));
}

std::vector<std::size_t> HilbertLayout::unravel(std::size_t index) const {
  std::vector<std::size_t> levels(subsystems_.size());
  for (std::size_t i = subsystems_.size(); i-- > 0;) {
    levels[i] = index % subsystems_[i].dimension;
    index /= subsystems_[i].dimension;
  }
  return levels;
}

std::size_t HilbertLayout::ravel(const std::vector<std::size_t>& levels) const {
  if (levels.size() != subsystems_.size()) throw std::invalid_argument("HilbertLayout::ravel: wrong rank");
  std::size_t index = 0;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (levels[i] >= subsystems_[i].dimension) throw std::out_of_range("HilbertLayout::ravel: level out of range");
    index = index * subsystems_[i].dimension + levels[i];
  }
  return index;
}

std::string HilbertLayout::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (i) out += ", ";
    out += subsystems_[i].label + ":" + std::to_string(subsystems_[i].dimension);
  }
  return out + "}";
}

}  // namespace hybridsim::quantum
