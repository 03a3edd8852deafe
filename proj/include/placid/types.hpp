#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace placid {

template <class Scalar, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using mat_type = Eigen::Matrix<Scalar, Rows, Cols>;

template <class Scalar, int Rows = Eigen::Dynamic>
using vec_type = Eigen::Matrix<Scalar, Rows, 1>;

using Matrix = mat_type<double>;
using Vector = vec_type<double>;

// Node and instrument indices are 0-based internally. 1-based indices only
// appear at the I/O boundary.
using Index = std::size_t;
using Edge = std::pair<Index, Index>;
using IndexSet = std::vector<Index>;  // kept sorted and unique

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: out-of-range indices, shape mismatches, invalid levels.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A directed cycle where a DAG is required. Carries the offending cycle.
class CycleError : public Error {
public:
    CycleError(std::string what, std::vector<Index> cycle)
        : Error(std::move(what)), cycle_(std::move(cycle)) {}
    const std::vector<Index>& cycle() const noexcept { return cycle_; }

private:
    std::vector<Index> cycle_;
};

// Numerical degeneracy: constant IV columns, singular GMM normal matrix, etc.
class DegenerateError : public Error {
public:
    using Error::Error;
};

} // namespace placid
