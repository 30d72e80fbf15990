#pragma once
#include <stdexcept>
#include <string>

namespace lobsim {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad parameter or malformed configuration (CLI exit code 2).
class config_error : public error {
public:
    explicit config_error(const std::string& what) : error(what) {}
};

/// Inconsistent input data: unreplayable event logs, malformed rows (exit code 3).
class integrity_error : public error {
public:
    explicit integrity_error(const std::string& what) : error(what) {}
};

/// A caller broke an operation contract (crossing limit price, unknown id).
class contract_error : public error {
public:
    explicit contract_error(const std::string& what) : error(what) {}
};

} // namespace lobsim
