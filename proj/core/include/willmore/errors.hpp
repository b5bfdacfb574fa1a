#pragma once

#include <stdexcept>
#include <string>

namespace willmore {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inversion of a quaternion whose magnitude is below the zero threshold.
class ZeroDivisorError : public Error {
 public:
  using Error::Error;
};

/// A chart or configuration that violates a documented invariant.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Too many branch (|dg| ~ 0) nodes for the chart to be usable.
class ChartDegenerateError : public Error {
 public:
  using Error::Error;
};

/// The 1-form handed to the 1-step transform is not closed.
class NotClosedError : public Error {
 public:
  using Error::Error;
};

/// The point at infinity of an affine frame is too close to the surface.
class FrameCollisionError : public Error {
 public:
  using Error::Error;
};

/// The covector beta cannot be formed because the kernel line meets eH.
class BetaSingularError : public Error {
 public:
  using Error::Error;
};

/// A Hopf field vanishes identically on the chart.
class AllZeroError : public Error {
 public:
  using Error::Error;
};

/// No Moebius normalization keeps infinity off a transformed surface.
class NoAffineChartError : public Error {
 public:
  using Error::Error;
};

/// Input to the sequence driver failed the Willmore (harmonicity) gate.
class NonWillmoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace willmore
