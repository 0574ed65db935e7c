#pragma once

#include <stdexcept>
#include <string>

namespace rgquad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operator would exceed the configured dense dimension cap.
class DimensionCapExceeded : public Error {
 public:
  DimensionCapExceeded(int num_spins, int cap)
      : Error("2^" + std::to_string(num_spins) +
              " exceeds the operator cap 2^" + std::to_string(cap)),
        num_spins_(num_spins),
        cap_(cap) {}
  int num_spins() const noexcept { return num_spins_; }
  int cap() const noexcept { return cap_; }

 private:
  int num_spins_;
  int cap_;
};

class NonHermitianOperator : public Error {
 public:
  using Error::Error;
};

/// The model's couplings and fields violate the commutation constraints.
class IntegrabilityViolation : public Error {
 public:
  using Error::Error;
};

/// A coupled pair whose quadratic coefficient has no valid denominator.
class DegenerateCoupling : public Error {
 public:
  DegenerateCoupling(int i, int j)
      : Error("pair (" + std::to_string(i) + "," + std::to_string(j) +
              ") is coupled but every route to C_ij has a vanishing "
              "denominator"),
        i_(i),
        j_(j) {}
  int i() const noexcept { return i_; }
  int j() const noexcept { return j_; }

 private:
  int i_;
  int j_;
};

/// Two derivation routes for the same coefficient disagree.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// Homotopy start is ill-posed because some |B_i| is (nearly) zero.
class StartupDegenerate : public Error {
 public:
  using Error::Error;
};

/// The charges do not commute, so joint eigenvalue tuples are meaningless.
class NonCommutingFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace rgquad
