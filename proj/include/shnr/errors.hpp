#pragma once

#include <stdexcept>
#include <string>

namespace shnr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSquare : public Error {
 public:
  explicit NonSquare(const std::string& what) : Error("non-square matrix: " + what) {}
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(const std::string& what) : Error("matrix is not Hermitian: " + what) {}
};

class NotPSD : public Error {
 public:
  explicit NotPSD(const std::string& what) : Error("matrix is not positive semidefinite: " + what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& what) : Error("non-finite entry: " + what) {}
};

/// The operator does not belong to B_A(H): R(T*A) is not contained in R(A).
class NoAdjoint : public Error {
 public:
  explicit NoAdjoint(const std::string& what) : Error("operator admits no A-adjoint: " + what) {}
};

class ZeroOperator : public Error {
 public:
  explicit ZeroOperator(const std::string& what) : Error("zero operator: " + what) {}
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& what) : Error("unknown inequality id: " + what) {}
};

class ArityMismatch : public Error {
 public:
  explicit ArityMismatch(const std::string& what) : Error("arity mismatch: " + what) {}
};

class FamilyNeedsIdentityA : public Error {
 public:
  explicit FamilyNeedsIdentityA(const std::string& what)
      : Error("family requires A = I: " + what) {}
};

}  // namespace shnr
