#pragma once

#include <stdexcept>
#include <string>

namespace graphcf {

enum class Status {
    ok = 0,
    invalid_arg = 1,
    io = 2,
    parse = 3,
    validation = 4,
    state = 5,
    numeric = 6,
    internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const { return status_; }

private:
    Status status_;
};

} // namespace graphcf
