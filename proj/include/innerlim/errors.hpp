#pragma once

#include <stdexcept>
#include <string>

namespace innerlim {

// Error with a stable machine-readable kind ("EmptySubset", "IndexOutOfRange", ...)
// in addition to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace innerlim
