#pragma once

// Number fields Q[x]/(g) in the power basis of the equation order Z[theta],
// primes above ell read off the factorization of g mod ell, and reduction
// into the residue field.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "galdef/ffkernel.hpp"

namespace galdef::nf {

using Integer = mpz_class;
using ff::u64;

enum class IrreducibilityEvidence {
  Proven,    // degree pattern / exhaustive search certificate found
  Asserted,  // no certificate; the caller's claim is taken at face value
};

class NumberField {
 public:
  /// `defining` is monic, constant term first. Throws Precondition when not
  /// monic and InvariantViolation when a rational root or an explicit
  /// factorization is found.
  explicit NumberField(std::vector<Integer> defining);

  int degree() const noexcept { return static_cast<int>(defining_.size()) - 1; }
  const std::vector<Integer>& defining() const noexcept { return defining_; }
  const Integer& discriminant() const noexcept { return discriminant_; }
  IrreducibilityEvidence irreducibility() const noexcept { return evidence_; }

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.defining_ == b.defining_; }

 private:
  std::vector<Integer> defining_;
  Integer discriminant_;
  IrreducibilityEvidence evidence_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

FieldPtr make_field(std::vector<Integer> defining);

/// Discriminant of a monic integer polynomial via a Bareiss determinant of
/// the Sylvester matrix of (g, g').
Integer poly_discriminant(const std::vector<Integer>& g);

/// numerator / denominator in the power basis 1, theta, ..., theta^(n-1).
class AlgebraicNumber {
 public:
  AlgebraicNumber(FieldPtr field, std::vector<Integer> numerator, Integer denominator = 1);

  static AlgebraicNumber from_integer(FieldPtr field, const Integer& n);
  static AlgebraicNumber from_rational(FieldPtr field, const Integer& n, const Integer& d);
  /// theta itself.
  static AlgebraicNumber generator(FieldPtr field);

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<Integer>& numerator() const noexcept { return num_; }
  const Integer& denominator() const noexcept { return den_; }
  bool is_zero() const;
  bool is_rational() const;

  AlgebraicNumber pow(unsigned exp) const;

  friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);

 private:
  void normalize();

  FieldPtr field_;
  std::vector<Integer> num_;
  Integer den_;
};

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a);
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);

std::string to_string(const AlgebraicNumber& a);

/// A prime of Z[theta] above ell, one per distinct irreducible factor of
/// g mod ell.
struct PrimeAbove {
  u64 ell;
  FieldPtr field;
  ff::FpPoly local_factor;
  int multiplicity;
  ff::ResidueField residue_field;
  bool ramified;       // multiplicity > 1
  bool index_warning;  // ell | disc(g); Z[theta] may not be maximal at ell
  std::size_t index;   // position in primes_above's output

  int residue_degree() const noexcept { return residue_field.degree(); }
  /// Reductions at this prime cannot be trusted.
  bool indeterminate() const noexcept { return ramified || index_warning; }
};

/// Throws NonPrimeModulus.
std::vector<PrimeAbove> primes_above(const FieldPtr& field, u64 ell);

/// Throws DenominatorNotInvertible when ell divides the denominator and
/// IndeterminateReduction at a ramified or index-warning prime.
ff::FqElement reduce(const AlgebraicNumber& a, const PrimeAbove& lambda);

bool is_unit_mod(const AlgebraicNumber& a, const PrimeAbove& lambda);

}  // namespace galdef::nf
