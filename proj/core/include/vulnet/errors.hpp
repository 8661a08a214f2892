// errors.hpp -- error types shared across the toolchain
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vulnet {

// Input failed validation: malformed records, broken references, bad
// protocol parameters. Carries the individual diagnostics when there are
// several. Maps to exit code 1 in the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string message)
        : std::runtime_error(std::move(message)) {}

    ValidationError(const std::string& message, std::vector<std::string> diagnostics)
        : std::runtime_error(join(message, diagnostics)),
          diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    static std::string join(const std::string& message,
                            const std::vector<std::string>& diagnostics) {
        std::string out = message;
        for (const auto& d : diagnostics) {
            out += "\n  ";
            out += d;
        }
        return out;
    }

    std::vector<std::string> diagnostics_;
};

// Filesystem-level failure: missing input, unreadable or unwritable path.
// Maps to exit code 2 in the CLI.
class IoError : public std::runtime_error {
public:
    explicit IoError(std::string message) : std::runtime_error(std::move(message)) {}
};

}  // namespace vulnet
