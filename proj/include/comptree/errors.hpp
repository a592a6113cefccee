#pragma once

#include <stdexcept>
#include <string>

namespace comptree {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeEntry : public Error {
 public:
  using Error::Error;
};

class SumOutOfTolerance : public Error {
 public:
  using Error::Error;
};

class NonPositivePrediction : public Error {
 public:
  using Error::Error;
};

class EmptyData : public Error {
 public:
  using Error::Error;
};

class InconsistentSampleCount : public Error {
 public:
  using Error::Error;
};

class InvalidTree : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class MissingParams : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Filesystem / parse failures while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Data-content failures while ingesting a dataset (carries node/row context).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Node-name disagreement between two tree artifacts.
class NameMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace comptree
