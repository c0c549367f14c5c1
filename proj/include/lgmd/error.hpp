#pragma once

#include <stdexcept>
#include <string>

namespace lgmd {

class Error : public std::runtime_error {
public:
    enum class Kind {
        argument,   // bad value passed by the caller
        dimension,  // grid shape mismatch
        io,         // file system failure
        parse,      // malformed file content
        range,      // value outside a documented bound
    };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace lgmd
