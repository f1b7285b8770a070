#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsim::quantum {

struct Subsystem {
  std::string label;
  std::size_t dimension = 1;

  bool operator==(const Subsystem&) const = default;
};

// Ordered tensor-product structure. The first subsystem is the most
// significant factor of the composite index.
class HilbertLayout {
 public:
  HilbertLayout() = default;
  explicit HilbertLayout(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const noexcept { return subsystems_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  std::size_t size() const noexcept { return subsystems_.size(); }

  bool contains(std::string_view label) const noexcept;
  // Throws std::invalid_argument for unknown labels.
  std::size_t index_of(std::string_view label) const;
  std::size_t dimension(std::string_view label) const { return subsystems_[index_of(label)].dimension; }
  // Distance in the composite index between neighbouring levels of a subsystem.
  std::size_t stride(std::size_t subsystem) const;

  // Sub-layout with the given labels, kept in this layout's order.
  HilbertLayout restricted(const std::vector<std::string>& keep) const;

  // Per-subsystem level indices of a composite index, and back.
  std::vector<std::size_t> unravel(std::size_t index) const;
  std::size_t ravel(const std::vector<std::size_t>& levels) const;

  std::string describe() const;

  bool operator==(const HilbertLayout& other) const { return subsystems_ == other.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_dim_ = 1;
};

}  // namespace hybridsim::quantum
