#ifndef CHOMET_PREPARATION_HPP
#define CHOMET_PREPARATION_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chomet {

/// Thrown when inputs violate a documented precondition (bad environment,
/// mismatched dimensions, invalid configuration values).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Domain {
  fractional,  ///< entries in [0, 1], the convex hull of the decision set
  binary       ///< entries in {0, 1}, an implementable decision
};

/// Flattened UE x cell preparation decision, index n = i * cells + j.
///
/// Since every per-UE row has exactly `cells` entries, the row-sum
/// constraint sum_j x_ij <= J is implied by the box; the convex hull is the
/// unit box and projection onto it is entrywise clipping.
class PreparationVector {
 public:
  PreparationVector() = default;

  PreparationVector(std::size_t ues, std::size_t cells, Domain domain)
      : ues_(ues), cells_(cells), domain_(domain), values_(ues * cells, 0.0) {}

  PreparationVector(std::size_t ues, std::size_t cells, Domain domain, std::vector<double> values)
      : ues_(ues), cells_(cells), domain_(domain), values_(std::move(values))
  {
    if (values_.size() != ues_ * cells_)
      throw InvalidArgument("preparation vector: expected " + std::to_string(ues_ * cells_) +
                            " entries, got " + std::to_string(values_.size()));
    if (!valid())
      throw InvalidArgument("preparation vector: entries outside the decision domain");
  }

  static PreparationVector zeros(std::size_t ues, std::size_t cells, Domain domain)
  {
    return PreparationVector(ues, cells, domain);
  }

  std::size_t ues() const { return ues_; }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return values_.size(); }
  Domain domain() const { return domain_; }

  double operator[](std::size_t n) const { return values_[n]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator()(std::size_t ue, std::size_t cell) const { return values_[ue * cells_ + cell]; }
  double& operator()(std::size_t ue, std::size_t cell) { return values_[ue * cells_ + cell]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Sum of all entries; for a binary vector, the number of prepared pairs.
  double total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  /// Checks the domain invariant (box or vertex set) for every entry.
  bool valid() const
  {
    for (double v : values_) {
      if (domain_ == Domain::binary) {
        if (v != 0.0 && v != 1.0) return false;
      } else if (!(v >= 0.0 && v <= 1.0)) {
        return false;
      }
    }
    return true;
  }

  bool same_shape(const PreparationVector& other) const
  {
    return ues_ == other.ues_ && cells_ == other.cells_;
  }

  friend bool operator==(const PreparationVector&, const PreparationVector&) = default;

 private:
  std::size_t ues_ = 0;
  std::size_t cells_ = 0;
  Domain domain_ = Domain::fractional;
  std::vector<double> values_;
};

}  // namespace chomet

#endif  // CHOMET_PREPARATION_HPP
