#pragma once

#include <stdexcept>
#include <string>

namespace polyknot {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct TooFewVertices : Error {
    explicit TooFewVertices(const std::string& msg) : Error(msg) {}
};

struct DegenerateEdge : Error {
    explicit DegenerateEdge(const std::string& msg) : Error(msg) {}
};

struct SelfIntersecting : Error {
    explicit SelfIntersecting(const std::string& msg) : Error(msg) {}
};

struct NotSimple : Error {
    explicit NotSimple(const std::string& msg) : Error(msg) {}
};

struct BadParameter : Error {
    explicit BadParameter(const std::string& msg) : Error(msg) {}
};

// A quadrature sample pair fell below the distance floor; the result would
// be numerically meaningless.
struct NonconvergentSample : Error {
    explicit NonconvergentSample(const std::string& msg) : Error(msg) {}
};

// A bound formula was evaluated below the length threshold where its
// derivation holds.
struct BelowDomain : Error {
    explicit BelowDomain(const std::string& msg) : Error(msg) {}
};

struct NoSignChange : Error {
    explicit NoSignChange(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace polyknot
