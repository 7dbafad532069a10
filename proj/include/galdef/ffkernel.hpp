#pragma once

// Exact arithmetic over F_ell and F_{ell^d}: dense univariate polynomials,
// factorization (squarefree -> distinct degree -> equal degree), residue
// fields and root finding.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace galdef::ff {

using u64 = std::uint64_t;

/// Generator state for the randomized splitters. Always passed explicitly.
using Rng = std::mt19937_64;

inline constexpr u64 kDefaultSeed = 0x5eed;

/// Deterministic trial division. Exact for every 64-bit input.
bool is_prime(u64 n);

u64 add_mod(u64 a, u64 b, u64 m);
u64 sub_mod(u64 a, u64 b, u64 m);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
/// Inverse modulo a prime; `a` must be nonzero mod m.
u64 inv_mod(u64 a, u64 m);
/// Reduce an arbitrary-precision integer into [0, m).
u64 reduce_integer(const mpz_class& a, u64 m);

/// Polynomial over F_ell, lowest degree first, always trimmed and reduced.
class FpPoly {
 public:
  explicit FpPoly(u64 modulus);
  FpPoly(u64 modulus, std::vector<u64> coeffs);

  static FpPoly from_integers(u64 modulus, std::span<const mpz_class> coeffs);
  static FpPoly monomial(u64 modulus, u64 coeff, std::size_t degree);
  static FpPoly constant(u64 modulus, u64 c) { return monomial(modulus, c, 0); }

  u64 modulus() const noexcept { return modulus_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
  const std::vector<u64>& coeffs() const noexcept { return coeffs_; }
  u64 coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
  u64 lead() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }

  u64 eval(u64 x) const;

  friend bool operator==(const FpPoly&, const FpPoly&) = default;
  /// Total order: modulus, then degree, then coefficients from the top.
  friend std::strong_ordering operator<=>(const FpPoly& a, const FpPoly& b);

 private:
  void normalize();

  u64 modulus_;
  std::vector<u64> coeffs_;
};

FpPoly operator+(const FpPoly& a, const FpPoly& b);
FpPoly operator-(const FpPoly& a, const FpPoly& b);
FpPoly operator-(const FpPoly& a);
FpPoly operator*(const FpPoly& a, const FpPoly& b);
FpPoly scale(const FpPoly& a, u64 c);

/// Quotient and remainder; `divisor` must be nonzero.
std::pair<FpPoly, FpPoly> divmod(const FpPoly& dividend, const FpPoly& divisor);
FpPoly rem(const FpPoly& a, const FpPoly& m);
FpPoly make_monic(const FpPoly& a);
/// Monic gcd (zero only if both inputs are zero).
FpPoly gcd(const FpPoly& a, const FpPoly& b);
FpPoly derivative(const FpPoly& a);
FpPoly pow_mod(const FpPoly& base, const mpz_class& exp, const FpPoly& modulus);
FpPoly pow_mod(const FpPoly& base, u64 exp, const FpPoly& modulus);
FpPoly pow(const FpPoly& base, unsigned exp);

std::string to_string(const FpPoly& p, char var = 'x');

struct Factor {
  FpPoly poly;
  int multiplicity;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Factor a monic polynomial over F_ell into distinct monic irreducibles.
/// Output is sorted by the FpPoly order.
std::vector<Factor> factor(const FpPoly& g, Rng& rng);

/// Factor an integer-coefficient monic polynomial modulo ell.
/// Throws NonPrimeModulus, or Precondition when g is not monic of degree >= 1.
std::vector<Factor> factor_mod_p(std::span<const mpz_class> g, u64 ell, Rng& rng);
std::vector<Factor> factor_mod_p(std::span<const mpz_class> g, u64 ell);

bool is_squarefree(const FpPoly& g);
bool is_irreducible(const FpPoly& g);

/// A random monic irreducible polynomial of the given degree.
FpPoly random_irreducible(u64 ell, int degree, Rng& rng);

class FqElement;

/// F_ell[y] / (defining). The defining polynomial is verified irreducible.
class ResidueField {
 public:
  /// Throws NonPrimeModulus, Precondition (not monic / degree < 1), Reducible.
  static ResidueField make(u64 ell, const FpPoly& defining);
  static ResidueField prime_field(u64 ell);

  u64 characteristic() const noexcept;
  int degree() const noexcept;
  const FpPoly& defining() const noexcept;
  /// ell^degree.
  mpz_class order() const;

  FqElement zero() const;
  FqElement one() const;
  FqElement from_int(u64 c) const;
  FqElement from_poly(const FpPoly& rep) const;
  /// The class of y.
  FqElement generator() const;

  friend bool operator==(const ResidueField& a, const ResidueField& b);

 private:
  struct Data {
    u64 ell;
    FpPoly defining;
  };
  explicit ResidueField(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

class FqElement {
 public:
  FqElement(ResidueField field, FpPoly rep);

  const ResidueField& field() const noexcept { return field_; }
  const FpPoly& rep() const noexcept { return rep_; }
  bool is_zero() const noexcept { return rep_.is_zero(); }
  bool is_one() const noexcept { return rep_.is_one(); }

  FqElement inverse() const;
  FqElement pow(const mpz_class& exp) const;

  friend bool operator==(const FqElement& a, const FqElement& b);
  friend std::strong_ordering operator<=>(const FqElement& a, const FqElement& b) {
    return a.rep_ <=> b.rep_;
  }

 private:
  ResidueField field_;
  FpPoly rep_;
};

FqElement operator+(const FqElement& a, const FqElement& b);
FqElement operator-(const FqElement& a, const FqElement& b);
FqElement operator-(const FqElement& a);
FqElement operator*(const FqElement& a, const FqElement& b);
FqElement operator/(const FqElement& a, const FqElement& b);

/// x -> x^ell.
FqElement frobenius(const FqElement& x);

std::string to_string(const FqElement& x, char var = 'y');

/// Polynomial with coefficients in a residue field, lowest degree first.
class FqPoly {
 public:
  FqPoly(ResidueField field, std::vector<FqElement> coeffs);

  /// Lift an F_ell polynomial into F[x].
  static FqPoly lift(const ResidueField& field, const FpPoly& p);

  const ResidueField& field() const noexcept { return field_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<FqElement>& coeffs() const noexcept { return coeffs_; }

  FqElement eval(const FqElement& x) const;

 private:
  ResidueField field_;
  std::vector<FqElement> coeffs_;
};

/// Distinct roots of p in its coefficient field, sorted. p must be nonzero.
std::vector<FqElement> fq_roots(const FqPoly& p, Rng& rng);
std::vector<FqElement> fq_roots(const FqPoly& p);

}  // namespace galdef::ff
