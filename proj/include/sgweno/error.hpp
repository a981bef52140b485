#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgweno {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a run produces a non-finite value.
class BlowUpError : public Error {
public:
    BlowUpError(std::size_t step, double time)
        : Error("non-finite value detected at step " + std::to_string(step) +
                " (t = " + std::to_string(time) + ")"),
          step_(step), time_(time) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

namespace detail {
inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}
}  // namespace detail

}  // namespace sgweno
