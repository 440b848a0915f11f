#ifndef IFDIV_ERRORS_HPP
#define IFDIV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifdiv {

/// Invalid input: out-of-range probabilities, bad counts, malformed configs.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A Gilbert-Elliott chain with p = r = 0 has no unique steady state.
class DegenerateChainError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Caller broke an operation's precondition (e.g. stepping an absorbing state).
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          m_line(line) {}

    std::size_t line() const { return m_line; }

  private:
    std::size_t m_line;
};

} // namespace ifdiv

#endif
