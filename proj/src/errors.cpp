#include "su11/errors.hpp"

#include <fmt/format.h>

namespace su11 {

DomainError::DomainError(std::string key, std::string accepted, double value)
    : Error(fmt::format("{} = {} is outside the accepted range {}", key, value, accepted)),
      key_(std::move(key)),
      accepted_(std::move(accepted)),
      value_(value) {}

TruncationOverflow::TruncationOverflow(double leakage, int n_max)
    : Error(fmt::format("truncation leakage {:.3e} at n_max = {} (limit 1e-8); raise n_max", leakage,
                        n_max)),
      leakage_(leakage) {}

}  // namespace su11
