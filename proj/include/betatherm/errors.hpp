// Error types shared across the library. Each error belongs to a family that
// maps to a CLI exit code: 1 configuration, 2 admissibility, 3 numerics /
// convergence, 4 hypothesis failure, 5 I/O.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace betatherm {

class Error : public std::runtime_error {
public:
    Error(int family, const std::string& what) : std::runtime_error(what), family_(family) {}
    int family() const noexcept { return family_; }

private:
    int family_;
};

// family 1: configuration and usage
struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error(1, "schema error: " + what) {}
};
struct DepthMismatch : Error {
    explicit DepthMismatch(const std::string& what) : Error(1, "depth mismatch: " + what) {}
};

// family 2: admissibility
struct NotAdmissible : Error {
    explicit NotAdmissible(const std::string& what) : Error(2, "not admissible: " + what) {}
};
struct NotBilateral : Error {
    explicit NotBilateral(const std::string& what) : Error(2, "not bilateral: " + what) {}
};
struct NotQuasiGreedy : Error {
    explicit NotQuasiGreedy(const std::string& what) : Error(2, "not quasi-greedy: " + what) {}
};
struct InadmissibleTableKey : Error {
    explicit InadmissibleTableKey(const std::string& word)
        : Error(2, "inadmissible table key: \"" + word + "\"") {}
};

// Raised when a truncated digit presentation of x^beta is too short to decide
// a comparison; carries the depth at which the scan was cut off.
class UnknownAtDepth : public Error {
public:
    explicit UnknownAtDepth(std::size_t depth)
        : Error(2, "undecidable at truncation depth " + std::to_string(depth)), depth_(depth) {}
    std::size_t depth() const noexcept { return depth_; }

private:
    std::size_t depth_;
};

// family 3: numerics and convergence
struct PrecisionBreach : Error {
    explicit PrecisionBreach(const std::string& what) : Error(3, "precision breach: " + what) {}
};
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(3, "no convergence: " + what) {}
};
struct NonPrimitive : Error {
    explicit NonPrimitive(const std::string& what) : Error(3, "non-primitive operator: " + what) {}
};
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& what) : Error(3, "ill-conditioned fit: " + what) {}
};
struct FillerDependence : Error {
    explicit FillerDependence(const std::string& what) : Error(3, "filler dependence: " + what) {}
};
struct EigenMismatch : Error {
    explicit EigenMismatch(const std::string& what) : Error(3, "eigenfunction mismatch: " + what) {}
};
struct OracleMismatch : Error {
    explicit OracleMismatch(const std::string& what) : Error(3, "oracle mismatch: " + what) {}
};
struct EstimateDivergence : Error {
    explicit EstimateDivergence(const std::string& what) : Error(3, "estimate divergence: " + what) {}
};
struct BoundaryDivergence : Error {
    explicit BoundaryDivergence(const std::string& what) : Error(3, "boundary divergence: " + what) {}
};
struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string& what) : Error(3, "resource limit: " + what) {}
};

// family 4: theorem hypothesis failures
struct NonUniqueMaximizer : Error {
    explicit NonUniqueMaximizer(const std::string& what)
        : Error(4, "non-unique maximizing measure: " + what) {}
};

// family 5: I/O
struct IoError : Error {
    explicit IoError(const std::string& what) : Error(5, "i/o error: " + what) {}
};

}  // namespace betatherm
