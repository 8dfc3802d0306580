#pragma once

#include <stdexcept>
#include <string>

namespace histq {

/// Raised when an operation's precondition or a domain invariant fails.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace histq
