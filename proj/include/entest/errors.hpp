#pragma once

#include <stdexcept>

namespace entest {

/// Argument outside the mathematical domain of an operation
/// (incompatible spin label, b outside [0,1], non-monotone map, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Malformed input object: bad POVM matrix, unnormalized prior, bad config.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bayes update conditioned on an outcome of zero marginal probability.
struct UndefinedPosteriorError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Eigenvalue clustering could not separate the blocks reliably.
struct AmbiguousClusteringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense oracle refused to build a matrix beyond its size limit.
struct DimensionLimitError : std::length_error {
  using std::length_error::length_error;
};

}  // namespace entest
