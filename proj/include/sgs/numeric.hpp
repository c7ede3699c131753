#ifndef SGS_NUMERIC_HPP
#define SGS_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace sgs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

/// Streaming log(sum(exp(x_i))) that never leaves log space.
class LogSumExp {
 public:
  void add(double log_x) {
    if (log_x == kNegInf) return;
    if (log_x <= max_) {
      sum_ += std::exp(log_x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_x) + 1.0;
      max_ = log_x;
    }
  }
  double value() const { return sum_ == 0.0 ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> values);

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Inverse-CDF draw from a categorical distribution whose weights sum to ~1.
int sample_categorical(std::span<const double> probabilities, Rng& rng);

/// Relative comparison helper: |a - b| / max(|b|, tiny).
double relative_error(double a, double b);

}  // namespace sgs

#endif  // SGS_NUMERIC_HPP
