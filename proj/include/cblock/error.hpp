#pragma once

#include <stdexcept>
#include <string>

namespace cblock {

// Two failure classes, mirroring the CLI exit codes:
// validation errors exit 1, I/O errors exit 2.
class Error : public std::runtime_error {
public:
    enum class Kind { Validation, Io };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Error validation_error(std::string message) {
    return Error(Error::Kind::Validation, std::move(message));
}

inline Error io_error(std::string message) {
    return Error(Error::Kind::Io, std::move(message));
}

}  // namespace cblock
