#ifndef CTAH_ERRORS_HPP
#define CTAH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctah {

// Invalid configuration supplied by the caller (bad depth, empty prior, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A precondition of an operation was violated (depth mismatch, range error, ...).
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// A statistic was requested before any data was recorded.
class EmptyDataError : public std::logic_error {
public:
    explicit EmptyDataError(const std::string& what) : std::logic_error(what) {}
};

// An internal numerical consistency check failed; signals a broken computation
// rather than floating-point noise.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem or format failure on an external file.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ctah

#endif // CTAH_ERRORS_HPP
