#include "galdef/numfield.hpp"

#include <algorithm>
#include <optional>
#include <numeric>
#include <sstream>

#include "galdef/errors.hpp"

namespace galdef::nf {

namespace {

Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

// Divisors of |n| (n != 0) when trial division fully factors it within the
// bound; empty optional otherwise.
std::optional<std::vector<Integer>> divisors(const Integer& n) {
  constexpr unsigned long kTrialBound = 2'000'000;
  Integer m = abs_int(n);
  std::vector<std::pair<Integer, unsigned>> fac;
  for (unsigned long p = 2; p <= kTrialBound && Integer(p) * p <= m; ++p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      m /= p;
      ++e;
    }
    if (e) fac.emplace_back(Integer(p), e);
  }
  if (m > 1) {
    if (m > Integer(kTrialBound) * kTrialBound) return std::nullopt;
    fac.emplace_back(m, 1);
  }
  std::vector<Integer> out{1};
  for (const auto& [p, e] : fac) {
    const std::size_t existing = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Integer eval(const std::vector<Integer>& g, const Integer& x) {
  Integer acc = 0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) acc = acc * x + *it;
  return acc;
}

bool is_square(const Integer& n, Integer& root) {
  if (n < 0) return false;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  return root * root == n;
}

// Does monic quartic g split as (x^2 + b x + c)(x^2 + d x + e) over Z?
bool has_quadratic_pair(const std::vector<Integer>& g, const std::vector<Integer>& divs) {
  const Integer &a0 = g[0], &a1 = g[1], &a2 = g[2], &a3 = g[3];
  for (const Integer& base : divs) {
    for (int sign : {1, -1}) {
      const Integer c = base * sign;
      const Integer e = a0 / c;
      if (e != c) {
        const Integer num = a1 - c * a3;
        const Integer den = e - c;
        if (num % den != 0) continue;
        const Integer b = num / den;
        const Integer d = a3 - b;
        if (b * d + c + e == a2) return true;
      } else {
        if (a1 != c * a3) continue;
        // b + d = a3, b d = a2 - 2c
        const Integer disc = a3 * a3 - 4 * (a2 - 2 * c);
        Integer r;
        if (is_square(disc, r) && (a3 + r) % 2 == 0) return true;
      }
    }
  }
  return false;
}

// Sound certificate: the degree of any rational factor is a subset sum of
// the factor degrees mod every good prime.
bool degree_pattern_certificate(const std::vector<Integer>& g, const Integer& disc) {
  const int n = static_cast<int>(g.size()) - 1;
  std::vector<bool> possible(static_cast<std::size_t>(n + 1), true);
  int tried = 0;
  ff::Rng rng(ff::kDefaultSeed);
  for (u64 p = 2; tried < 60 && p < 2000; ++p) {
    if (!ff::is_prime(p) || mpz_divisible_ui_p(disc.get_mpz_t(), p)) continue;
    ++tried;
    std::vector<bool> sums(static_cast<std::size_t>(n + 1), false);
    sums[0] = true;
    for (const auto& f : ff::factor_mod_p(g, p, rng)) {
      const int d = f.poly.degree();
      for (int s = n; s >= d; --s) {
        if (sums[static_cast<std::size_t>(s - d)]) sums[static_cast<std::size_t>(s)] = true;
      }
    }
    bool any = false;
    for (int s = 1; s < n; ++s) {
      possible[static_cast<std::size_t>(s)] = possible[static_cast<std::size_t>(s)] && sums[static_cast<std::size_t>(s)];
      any = any || possible[static_cast<std::size_t>(s)];
    }
    if (!any) return true;
  }
  return false;
}

[[noreturn]] void reducible(const std::string& why) {
  throw Error(ErrorKind::InvariantViolation, "defining polynomial is reducible over Q: " + why, "field_poly");
}

IrreducibilityEvidence check_irreducible(const std::vector<Integer>& g, const Integer& disc) {
  const int n = static_cast<int>(g.size()) - 1;
  if (n == 1) return IrreducibilityEvidence::Proven;
  if (g[0] == 0) reducible("x divides it");
  if (disc != 0 && degree_pattern_certificate(g, disc)) return IrreducibilityEvidence::Proven;

  const auto divs = divisors(g[0]);
  if (!divs) return IrreducibilityEvidence::Asserted;
  for (const Integer& d : *divs) {
    if (eval(g, d) == 0) reducible("rational root " + d.get_str());
    if (eval(g, Integer(-d)) == 0) reducible("rational root -" + d.get_str());
  }
  if (n <= 3) return IrreducibilityEvidence::Proven;
  if (n == 4) {
    if (has_quadratic_pair(g, *divs)) reducible("product of two integer quadratics");
    return IrreducibilityEvidence::Proven;
  }
  return IrreducibilityEvidence::Asserted;
}

Integer bareiss_determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

Integer poly_discriminant(const std::vector<Integer>& g) {
  const std::size_t n = g.size() - 1;
  if (n <= 1) return 1;
  std::vector<Integer> dg(n);
  for (std::size_t i = 1; i <= n; ++i) dg[i - 1] = g[i] * static_cast<unsigned long>(i);
  const std::size_t size = 2 * n - 1;
  std::vector<std::vector<Integer>> syl(size, std::vector<Integer>(size, 0));
  // n - 1 shifted rows of g, then n shifted rows of g', highest degree first.
  for (std::size_t r = 0; r + 1 < n; ++r) {
    for (std::size_t j = 0; j <= n; ++j) syl[r][r + j] = g[n - j];
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < n; ++j) syl[n - 1 + r][r + j] = dg[n - 1 - j];
  }
  Integer res = bareiss_determinant(std::move(syl));
  return (n * (n - 1) / 2) % 2 ? Integer(-res) : res;
}

NumberField::NumberField(std::vector<Integer> defining) : defining_(std::move(defining)) {
  if (defining_.size() < 2 || defining_.back() != 1) {
    throw Error(ErrorKind::Precondition, "defining polynomial must be monic of degree >= 1", "field_poly");
  }
  discriminant_ = poly_discriminant(defining_);
  if (discriminant_ == 0) reducible("repeated factor (zero discriminant)");
  evidence_ = check_irreducible(defining_, discriminant_);
}

FieldPtr make_field(std::vector<Integer> defining) { return std::make_shared<const NumberField>(std::move(defining)); }

// ---------------------------------------------------------- AlgebraicNumber

AlgebraicNumber::AlgebraicNumber(FieldPtr field, std::vector<Integer> numerator, Integer denominator)
    : field_(std::move(field)), num_(std::move(numerator)), den_(std::move(denominator)) {
  if (!field_) throw Error(ErrorKind::Precondition, "element without a field");
  if (num_.size() != static_cast<std::size_t>(field_->degree())) {
    throw Error(ErrorKind::Precondition, "numerator length " + std::to_string(num_.size()) +
                                             " does not match field degree " + std::to_string(field_->degree()));
  }
  if (den_ == 0) throw Error(ErrorKind::Precondition, "zero denominator");
  normalize();
}

void AlgebraicNumber::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  Integer g = den_;
  for (const auto& c : num_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (is_zero()) g = den_;
  if (g > 1) {
    den_ /= g;
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

AlgebraicNumber AlgebraicNumber::from_integer(FieldPtr field, const Integer& n) { return from_rational(std::move(field), n, 1); }

AlgebraicNumber AlgebraicNumber::from_rational(FieldPtr field, const Integer& n, const Integer& d) {
  std::vector<Integer> num(static_cast<std::size_t>(field->degree()), 0);
  num[0] = n;
  return AlgebraicNumber(std::move(field), std::move(num), d);
}

AlgebraicNumber AlgebraicNumber::generator(FieldPtr field) {
  const int n = field->degree();
  if (n == 1) return from_integer(field, -field->defining()[0]);
  std::vector<Integer> num(static_cast<std::size_t>(n), 0);
  num[1] = 1;
  return AlgebraicNumber(std::move(field), std::move(num));
}

bool AlgebraicNumber::is_zero() const {
  return std::all_of(num_.begin(), num_.end(), [](const Integer& c) { return c == 0; });
}

bool AlgebraicNumber::is_rational() const {
  return std::all_of(num_.begin() + 1, num_.end(), [](const Integer& c) { return c == 0; });
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  return *a.field_ == *b.field_ && a.num_ == b.num_ && a.den_ == b.den_;
}

namespace {

void require_same_field(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (!(*a.field() == *b.field())) throw Error(ErrorKind::Precondition, "elements of different number fields");
}

}  // namespace

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  require_same_field(a, b);
  std::vector<Integer> num(a.numerator().size());
  for (std::size_t i = 0; i < num.size(); ++i) num[i] = a.numerator()[i] * b.denominator() + b.numerator()[i] * a.denominator();
  return AlgebraicNumber(a.field(), std::move(num), a.denominator() * b.denominator());
}

AlgebraicNumber operator-(const AlgebraicNumber& a) {
  std::vector<Integer> num(a.numerator());
  for (auto& c : num) c = -c;
  return AlgebraicNumber(a.field(), std::move(num), a.denominator());
}

AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a + (-b); }

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  require_same_field(a, b);
  const auto& g = a.field()->defining();
  const std::size_t n = g.size() - 1;
  std::vector<Integer> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.numerator()[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] += a.numerator()[i] * b.numerator()[j];
  }
  // theta^n = -(g_0 + g_1 theta + ... + g_{n-1} theta^{n-1})
  for (std::size_t d = prod.size(); d-- > n;) {
    const Integer c = prod[d];
    if (c == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[d - n + j] -= c * g[j];
    prod[d] = 0;
  }
  prod.resize(n);
  return AlgebraicNumber(a.field(), std::move(prod), a.denominator() * b.denominator());
}

AlgebraicNumber AlgebraicNumber::pow(unsigned exp) const {
  AlgebraicNumber result = from_integer(field_, 1);
  AlgebraicNumber base = *this;
  while (exp) {
    if (exp & 1) result = result * base;
    exp >>= 1;
    if (exp) base = base * base;
  }
  return result;
}

std::string to_string(const AlgebraicNumber& a) {
  std::ostringstream out;
  bool first = true;
  const bool frac = a.denominator() != 1;
  if (frac) out << '(';
  for (std::size_t i = a.numerator().size(); i-- > 0;) {
    const Integer& c = a.numerator()[i];
    if (c == 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << '-';
    first = false;
    const Integer m = abs_int(c);
    if (i == 0 || m != 1) out << m.get_str();
    if (i > 0) {
      if (m != 1) out << '*';
      out << 't';
      if (i > 1) out << '^' << i;
    }
  }
  if (first) out << '0';
  if (frac) out << ")/" << a.denominator().get_str();
  return out.str();
}

// ------------------------------------------------------------------ primes

std::vector<PrimeAbove> primes_above(const FieldPtr& field, u64 ell) {
  if (!ff::is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime");
  ff::Rng rng(ff::kDefaultSeed ^ ell);
  const auto factors = ff::factor_mod_p(field->defining(), ell, rng);
  const bool index_warning = mpz_divisible_ui_p(field->discriminant().get_mpz_t(), ell) != 0;
  std::vector<PrimeAbove> out;
  out.reserve(factors.size());
  for (const auto& f : factors) {
    out.push_back(PrimeAbove{ell, field, f.poly, f.multiplicity, ff::ResidueField::make(ell, f.poly),
                             f.multiplicity > 1, index_warning, out.size()});
  }
  return out;
}

ff::FqElement reduce(const AlgebraicNumber& a, const PrimeAbove& lambda) {
  if (!(*a.field() == *lambda.field)) throw Error(ErrorKind::Precondition, "prime belongs to a different field");
  const u64 ell = lambda.ell;
  const u64 den = ff::reduce_integer(a.denominator(), ell);
  if (den == 0) {
    throw Error(ErrorKind::DenominatorNotInvertible,
                std::to_string(ell) + " divides the denominator " + a.denominator().get_str());
  }
  if (lambda.indeterminate()) {
    throw Error(ErrorKind::IndeterminateReduction,
                std::string(lambda.ramified ? "ramified" : "index-warning") + " prime above " + std::to_string(ell));
  }
  const ff::FpPoly num = ff::FpPoly::from_integers(ell, a.numerator());
  return lambda.residue_field.from_poly(ff::scale(num, ff::inv_mod(den, ell)));
}

bool is_unit_mod(const AlgebraicNumber& a, const PrimeAbove& lambda) { return !reduce(a, lambda).is_zero(); }

}  // namespace galdef::nf
