#pragma once

#include <stdexcept>
#include <string>

namespace hyperconn {

// Shapes that do not conform (add, Einstein product, fold).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user-supplied parameters: out-of-range k, invalid graph, bad config.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A function evaluated outside its domain (log of a non-PD tensor, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation precondition violated by a numerical property of the input
// (non-Hermitian tensor handed to the eigensolver, non-PSD Laplace sum).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hyperconn
