#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Numerical or contract failure carrying a stable error name.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Invalid user input (configuration, schema, argument ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& what) {
    throw Error(name, what);
}

}  // namespace liouville
