#pragma once

#include <stdexcept>
#include <string>

namespace snapmem {

/** Malformed or out-of-range input supplied by a caller. */
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/** A documented precondition or structural invariant does not hold. */
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/** The exact dual oracle refuses instances above its size cap. */
class CapExceeded : public std::length_error {
public:
  explicit CapExceeded(const std::string& what) : std::length_error(what) {}
};

} // namespace snapmem
