// Error hierarchy shared by the whole library.

#ifndef HDG_ERRORS_HPP
#define HDG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hdg {

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input (bad indices, duplicate letters, ...).
struct input_error : error {
    explicit input_error(const std::string& what) : error(what) {}
};

/// An operation was asked to run outside its supported fragment.
struct unsupported_error : error {
    explicit unsupported_error(const std::string& what) : error(what) {}
};

/// A strategy or certificate handed in as a witness does not hold up.
struct invalid_witness_error : error {
    explicit invalid_witness_error(const std::string& what) : error(what) {}
};

/// Asked to extract a strategy for a player who does not win.
struct no_strategy_error : error {
    explicit no_strategy_error(const std::string& what) : error(what) {}
};

/// Two decision paths that must agree disagreed; indicates a bug or a bad monitor.
struct inconsistency_error : error {
    explicit inconsistency_error(const std::string& what) : error(what) {}
};

} // namespace hdg

#endif // HDG_ERRORS_HPP
