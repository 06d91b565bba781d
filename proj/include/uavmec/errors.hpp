#pragma once

#include <stdexcept>
#include <string>

namespace uavmec {

// Raised when a config or parameter violates its documented invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A link with zero/negative rate cannot carry the requested traffic.
class InfeasibleLinkError : public std::runtime_error {
public:
    explicit InfeasibleLinkError(const std::string& what) : std::runtime_error(what) {}
};

// Zero CPU allocation with a positive workload.
class InfeasibleAllocationError : public std::runtime_error {
public:
    explicit InfeasibleAllocationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace uavmec
