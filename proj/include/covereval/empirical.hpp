#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "covereval/error.hpp"

namespace covereval {

/// Sorted multiset of real samples, stored run-length encoded as distinct
/// values with multiplicities. Hop plots of large graphs hold billions of
/// samples but only a few dozen distinct values.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;

  static EmpiricalDistribution from_samples(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    EmpiricalDistribution d;
    for (double x : samples) {
      if (!std::isfinite(x)) throw ValidationError("empirical distribution: non-finite sample");
      if (!d.values_.empty() && d.values_.back() == x) {
        ++d.counts_.back();
      } else {
        d.values_.push_back(x);
        d.counts_.push_back(1);
      }
    }
    d.n_ = samples.size();
    return d;
  }

  /// Builds from (value, multiplicity) pairs; zero multiplicities are dropped.
  static EmpiricalDistribution from_counts(const std::map<double, std::uint64_t>& counts) {
    EmpiricalDistribution d;
    for (const auto& [v, c] : counts) {
      if (c == 0) continue;
      if (!std::isfinite(v)) throw ValidationError("empirical distribution: non-finite sample");
      d.values_.push_back(v);
      d.counts_.push_back(c);
      d.n_ += c;
    }
    return d;
  }

  bool empty() const noexcept { return n_ == 0; }
  std::uint64_t size() const noexcept { return n_; }

  /// Distinct sample values, strictly increasing.
  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  double min() const { return require_nonempty(), values_.front(); }
  double max() const { return require_nonempty(), values_.back(); }

  double sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * static_cast<double>(counts_[i]);
    return s;
  }

  double mean() const { return require_nonempty(), sum() / static_cast<double>(n_); }

  /// Population variance (divides by n).
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double d = values_[i] - m;
      s += d * d * static_cast<double>(counts_[i]);
    }
    return s / static_cast<double>(n_);
  }

  /// Number of samples <= x.
  std::uint64_t count_at_most(double x) const {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < values_.size() && values_[i] <= x; ++i) c += counts_[i];
    return c;
  }

  /// Right-continuous ECDF: (#samples <= x) / n.
  double ecdf(double x) const {
    return static_cast<double>(count_at_most(x)) / static_cast<double>(n_);
  }

  /// Left limit of the ECDF: (#samples < x) / n.
  double ecdf_left(double x) const {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < values_.size() && values_[i] < x; ++i) c += counts_[i];
    return static_cast<double>(c) / static_cast<double>(n_);
  }

  /// Nearest-rank percentile: the smallest sample v with
  /// #samples <= v >= ceil(percent/100 * n). percent in [1, 100].
  double percentile(unsigned percent) const {
    require_nonempty();
    if (percent == 0 || percent > 100) throw ValidationError("percentile must be in [1, 100]");
    const std::uint64_t rank = (static_cast<std::uint64_t>(percent) * n_ + 99) / 100;
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      c += counts_[i];
      if (c >= rank) return values_[i];
    }
    return values_.back();
  }

  /// The sub-multiset of strictly positive samples.
  EmpiricalDistribution positive_part() const {
    EmpiricalDistribution d;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] > 0.0) {
        d.values_.push_back(values_[i]);
        d.counts_.push_back(counts_[i]);
        d.n_ += counts_[i];
      }
    }
    return d;
  }

  /// Expanded sorted sample list; meant for small distributions.
  std::vector<double> samples() const {
    std::vector<double> out;
    out.reserve(n_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.insert(out.end(), counts_[i], values_[i]);
    return out;
  }

  /// Weighted sum of f(value) over all samples.
  template <typename F>
  double accumulate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += f(values_[i]) * static_cast<double>(counts_[i]);
    return s;
  }

  bool operator==(const EmpiricalDistribution&) const = default;

 private:
  void require_nonempty() const {
    if (n_ == 0) throw ValidationError("empirical distribution is empty");
  }

  std::vector<double> values_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

}  // namespace covereval
