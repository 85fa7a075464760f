#pragma once

#include <stdexcept>
#include <string>

namespace nmf {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested factorization rank violates r >= 1 or r <= min(m, n).
class BadRank : public Error {
 public:
  using Error::Error;
};

// Column-averaging parameter q outside [1, n] or q > pool.
class BadQ : public Error {
 public:
  using Error::Error;
};

// Cluster count k outside [1, n].
class BadK : public Error {
 public:
  using Error::Error;
};

// An operation that divides by a norm received an all-zero matrix.
class ZeroMatrix : public Error {
 public:
  using Error::Error;
};

// A column/row selection was empty where at least one index is required.
class EmptySelection : public Error {
 public:
  using Error::Error;
};

// An iterative scheme exceeded its iteration cap without converging.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Objective undefined at the given point (e.g. x > 0 where wh = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Image-based initializer applied to data whose row count is not rows*cols.
class NotAnImageDataset : public Error {
 public:
  using Error::Error;
};

// Input carries no usable signal (e.g. all dataset columns identical).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

// Spectrum handed to rank selection sums to zero.
class ZeroSpectrum : public Error {
 public:
  using Error::Error;
};

// Malformed text input; line numbers are 1-based.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Dataset value below zero; positions are 0-based (row, col).
class NegativeEntry : public Error {
 public:
  using Error::Error;
};

// Images in one dataset directory disagree on dimensions.
class MixedDimensions : public Error {
 public:
  using Error::Error;
};

// File magic/encoding not supported by the loader.
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

// Filesystem-level read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nmf
