#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kfg {

enum class ErrorKind {
    Domain,
    NotBound,
    UnsupportedRegime,
    NoBracket,
    InfeasibleRing,
    NoNormalizableGroundState,
    ConvergenceFailure,
    OracleFailure,
    NoBoundState,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the failure class.
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what)
        , kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Raised by the fixed-point solver; carries the energy iterates seen before giving up.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : Error(ErrorKind::ConvergenceFailure, what)
        , history_(std::move(history))
    {
    }

    const std::vector<double>& history() const noexcept { return history_; }

  private:
    std::vector<double> history_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace kfg
