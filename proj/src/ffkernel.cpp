#include "galdef/ffkernel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "galdef/errors.hpp"

namespace galdef::ff {

bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (u64 d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s < a || s >= m) s -= m;
  return s;
}

u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 m) {
  a %= m;
  if (a == 0) throw Error(ErrorKind::Precondition, "zero has no inverse modulo " + std::to_string(m));
  return pow_mod(a, m - 2, m);
}

u64 reduce_integer(const mpz_class& a, u64 m) {
  mpz_class r;
  mpz_class mm;
  mpz_import(mm.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &m);
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
  u64 out = 0;
  mpz_export(&out, nullptr, -1, sizeof(u64), 0, 0, r.get_mpz_t());
  return out;
}

// ------------------------------------------------------------------ FpPoly

FpPoly::FpPoly(u64 modulus) : modulus_(modulus) {}

FpPoly::FpPoly(u64 modulus, std::vector<u64> coeffs) : modulus_(modulus), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= modulus_;
  normalize();
}

FpPoly FpPoly::from_integers(u64 modulus, std::span<const mpz_class> coeffs) {
  std::vector<u64> c;
  c.reserve(coeffs.size());
  for (const auto& a : coeffs) c.push_back(reduce_integer(a, modulus));
  return FpPoly(modulus, std::move(c));
}

FpPoly FpPoly::monomial(u64 modulus, u64 coeff, std::size_t degree) {
  std::vector<u64> c(degree + 1, 0);
  c[degree] = coeff;
  return FpPoly(modulus, std::move(c));
}

void FpPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

u64 FpPoly::eval(u64 x) const {
  u64 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = add_mod(mul_mod(acc, x, modulus_), *it, modulus_);
  return acc;
}

std::strong_ordering operator<=>(const FpPoly& a, const FpPoly& b) {
  if (auto c = a.modulus_ <=> b.modulus_; c != 0) return c;
  if (auto c = a.coeffs_.size() <=> b.coeffs_.size(); c != 0) return c;
  for (std::size_t i = a.coeffs_.size(); i-- > 0;) {
    if (auto c = a.coeffs_[i] <=> b.coeffs_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

void require_same_modulus(const FpPoly& a, const FpPoly& b) {
  if (a.modulus() != b.modulus()) throw Error(ErrorKind::Precondition, "polynomials over different prime fields");
}

}  // namespace

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  require_same_modulus(a, b);
  const u64 m = a.modulus();
  std::vector<u64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = add_mod(a.coeff(i), b.coeff(i), m);
  return FpPoly(m, std::move(c));
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
  require_same_modulus(a, b);
  const u64 m = a.modulus();
  std::vector<u64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub_mod(a.coeff(i), b.coeff(i), m);
  return FpPoly(m, std::move(c));
}

FpPoly operator-(const FpPoly& a) { return FpPoly(a.modulus()) - a; }

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  require_same_modulus(a, b);
  const u64 m = a.modulus();
  if (a.is_zero() || b.is_zero()) return FpPoly(m);
  std::vector<u64> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      c[i + j] = add_mod(c[i + j], mul_mod(a.coeffs()[i], b.coeffs()[j], m), m);
    }
  }
  return FpPoly(m, std::move(c));
}

FpPoly scale(const FpPoly& a, u64 c) {
  std::vector<u64> out(a.coeffs());
  for (auto& x : out) x = mul_mod(x, c % a.modulus(), a.modulus());
  return FpPoly(a.modulus(), std::move(out));
}

std::pair<FpPoly, FpPoly> divmod(const FpPoly& dividend, const FpPoly& divisor) {
  require_same_modulus(dividend, divisor);
  if (divisor.is_zero()) throw Error(ErrorKind::Precondition, "polynomial division by zero");
  const u64 m = dividend.modulus();
  if (dividend.degree() < divisor.degree()) return {FpPoly(m), dividend};
  std::vector<u64> r = dividend.coeffs();
  const auto& d = divisor.coeffs();
  const std::size_t dd = d.size() - 1;
  const u64 lead_inv = inv_mod(d.back(), m);
  std::vector<u64> q(r.size() - dd, 0);
  for (std::size_t i = r.size(); i-- > dd;) {
    const u64 c = mul_mod(r[i], lead_inv, m);
    q[i - dd] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) r[i - dd + j] = sub_mod(r[i - dd + j], mul_mod(c, d[j], m), m);
  }
  r.resize(dd);
  return {FpPoly(m, std::move(q)), FpPoly(m, std::move(r))};
}

FpPoly rem(const FpPoly& a, const FpPoly& m) {
  if (a.degree() < m.degree()) return a;
  return divmod(a, m).second;
}

FpPoly make_monic(const FpPoly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a, inv_mod(a.lead(), a.modulus()));
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(x);
}

FpPoly derivative(const FpPoly& a) {
  if (a.degree() < 1) return FpPoly(a.modulus());
  std::vector<u64> c(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = mul_mod(a.coeffs()[i], i % a.modulus(), a.modulus());
  return FpPoly(a.modulus(), std::move(c));
}

FpPoly pow_mod(const FpPoly& base, const mpz_class& exp, const FpPoly& modulus) {
  if (exp < 0) throw Error(ErrorKind::Precondition, "negative exponent");
  FpPoly result = rem(FpPoly::constant(base.modulus(), 1), modulus);
  FpPoly b = rem(base, modulus);
  const std::size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(result * result, modulus);
    if (mpz_tstbit(exp.get_mpz_t(), i)) result = rem(result * b, modulus);
  }
  return result;
}

FpPoly pow_mod(const FpPoly& base, u64 exp, const FpPoly& modulus) {
  mpz_class e;
  mpz_import(e.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &exp);
  return pow_mod(base, e, modulus);
}

FpPoly pow(const FpPoly& base, unsigned exp) {
  FpPoly result = FpPoly::constant(base.modulus(), 1);
  for (unsigned i = 0; i < exp; ++i) result = result * base;
  return result;
}

std::string to_string(const FpPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    const u64 c = p.coeffs()[i];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (i == 0) {
      out << c;
      continue;
    }
    if (c != 1) out << c << '*';
    out << var;
    if (i > 1) out << '^' << i;
  }
  return out.str();
}

// --------------------------------------------------------- factorization

namespace {

FpPoly exact_div(const FpPoly& a, const FpPoly& b) { return divmod(a, b).first; }

// f(x) = h(x^p) -> h.
FpPoly pth_root(const FpPoly& f) {
  const u64 p = f.modulus();
  std::vector<u64> c;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) c.push_back(f.coeffs()[i]);
  return FpPoly(p, std::move(c));
}

void squarefree_parts(const FpPoly& f, int scale_mult, std::map<FpPoly, int>& out) {
  if (f.degree() < 1) return;
  const u64 p = f.modulus();
  const FpPoly fp = derivative(f);
  if (fp.is_zero()) {
    squarefree_parts(pth_root(f), scale_mult * static_cast<int>(p), out);
    return;
  }
  FpPoly c = gcd(f, fp);
  FpPoly w = exact_div(f, c);
  int i = 1;
  while (!w.is_one()) {
    FpPoly y = gcd(w, c);
    FpPoly fac = exact_div(w, y);
    if (!fac.is_one()) out[make_monic(fac)] += i * scale_mult;
    w = std::move(y);
    c = exact_div(c, w);
    ++i;
  }
  if (c.degree() >= 1) squarefree_parts(pth_root(make_monic(c)), scale_mult * static_cast<int>(p), out);
}

std::vector<std::pair<FpPoly, int>> distinct_degree(const FpPoly& f) {
  std::vector<std::pair<FpPoly, int>> out;
  const u64 p = f.modulus();
  const FpPoly x = FpPoly::monomial(p, 1, 1);
  FpPoly rest = f;
  FpPoly h = rem(x, rest);
  int d = 0;
  while (rest.degree() >= 2 * (d + 1)) {
    ++d;
    h = pow_mod(h, p, rest);
    FpPoly g = gcd(h - x, rest);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      rest = exact_div(rest, g);
      h = rem(h, rest);
    }
  }
  if (rest.degree() > 0) out.emplace_back(make_monic(rest), rest.degree());
  return out;
}

FpPoly random_poly(u64 p, int below_degree, Rng& rng) {
  std::uniform_int_distribution<u64> dist(0, p - 1);
  std::vector<u64> c(static_cast<std::size_t>(below_degree));
  for (auto& x : c) x = dist(rng);
  return FpPoly(p, std::move(c));
}

constexpr u64 kRootScanLimit = u64{1} << 20;

void equal_degree(const FpPoly& f, int d, Rng& rng, std::vector<FpPoly>& out) {
  const u64 p = f.modulus();
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  if (d == 1 && f.degree() == 2 && p <= kRootScanLimit) {
    for (u64 r = 0; r < p; ++r) {
      if (f.eval(r) == 0) {
        FpPoly lin(p, {sub_mod(0, r, p), 1});
        out.push_back(lin);
        out.push_back(exact_div(f, lin));
        return;
      }
    }
  }
  mpz_class half;
  if (p != 2) {
    mpz_ui_pow_ui(half.get_mpz_t(), p, static_cast<unsigned long>(d));
    half = (half - 1) / 2;
  }
  for (;;) {
    FpPoly a = random_poly(p, f.degree(), rng);
    if (a.degree() < 1) continue;
    FpPoly g = gcd(a, f);
    if (g.degree() == 0) {
      FpPoly b(p);
      if (p == 2) {
        FpPoly t = a;
        b = a;
        for (int i = 1; i < d; ++i) {
          t = rem(t * t, f);
          b = b + t;
        }
      } else {
        b = pow_mod(a, half, f) - FpPoly::constant(p, 1);
      }
      g = gcd(b, f);
    }
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(exact_div(f, g), d, rng, out);
      return;
    }
  }
}

}  // namespace

bool is_squarefree(const FpPoly& g) {
  if (g.degree() < 1) return true;
  return gcd(g, derivative(g)).is_one();
}

bool is_irreducible(const FpPoly& g) {
  if (g.degree() < 1) return false;
  const FpPoly f = make_monic(g);
  if (f.degree() == 1) return true;
  if (!is_squarefree(f)) return false;
  auto pieces = distinct_degree(f);
  return pieces.size() == 1 && pieces.front().second == f.degree();
}

std::vector<Factor> factor(const FpPoly& g, Rng& rng) {
  if (g.degree() < 1 || !g.is_monic()) {
    throw Error(ErrorKind::Precondition, "factor expects a monic polynomial of degree >= 1");
  }
  std::map<FpPoly, int> parts;
  squarefree_parts(g, 1, parts);
  std::map<FpPoly, int> merged;
  for (const auto& [sqf, mult] : parts) {
    for (const auto& [piece, d] : distinct_degree(sqf)) {
      std::vector<FpPoly> irr;
      equal_degree(piece, d, rng, irr);
      for (auto& q : irr) merged[make_monic(q)] += mult;
    }
  }
  std::vector<Factor> out;
  out.reserve(merged.size());
  for (auto& [poly, mult] : merged) out.push_back({poly, mult});
  return out;
}

std::vector<Factor> factor_mod_p(std::span<const mpz_class> g, u64 ell, Rng& rng) {
  if (!is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime");
  if (g.size() < 2 || g.back() != 1) {
    throw Error(ErrorKind::Precondition, "expected a monic integer polynomial of degree >= 1");
  }
  return factor(FpPoly::from_integers(ell, g), rng);
}

std::vector<Factor> factor_mod_p(std::span<const mpz_class> g, u64 ell) {
  Rng rng(kDefaultSeed);
  return factor_mod_p(g, ell, rng);
}

FpPoly random_irreducible(u64 ell, int degree, Rng& rng) {
  if (degree < 1) throw Error(ErrorKind::Precondition, "degree must be positive");
  for (;;) {
    FpPoly c = random_poly(ell, degree, rng) + FpPoly::monomial(ell, 1, static_cast<std::size_t>(degree));
    if (is_irreducible(c)) return c;
  }
}

// ------------------------------------------------------------ residue field

ResidueField ResidueField::make(u64 ell, const FpPoly& defining) {
  if (!is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime");
  if (defining.modulus() != ell) throw Error(ErrorKind::Precondition, "defining polynomial has the wrong modulus");
  if (defining.degree() < 1 || !defining.is_monic()) {
    throw Error(ErrorKind::Precondition, "defining polynomial must be monic of degree >= 1");
  }
  if (!is_irreducible(defining)) {
    throw Error(ErrorKind::Reducible, to_string(defining, 'y') + " is reducible mod " + std::to_string(ell));
  }
  return ResidueField(std::make_shared<const Data>(Data{ell, defining}));
}

ResidueField ResidueField::prime_field(u64 ell) { return make(ell, FpPoly(ell, {0, 1})); }

u64 ResidueField::characteristic() const noexcept { return data_->ell; }
int ResidueField::degree() const noexcept { return data_->defining.degree(); }
const FpPoly& ResidueField::defining() const noexcept { return data_->defining; }

mpz_class ResidueField::order() const {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), data_->ell, static_cast<unsigned long>(degree()));
  return q;
}

FqElement ResidueField::zero() const { return FqElement(*this, FpPoly(data_->ell)); }
FqElement ResidueField::one() const { return from_int(1); }
FqElement ResidueField::from_int(u64 c) const { return FqElement(*this, FpPoly::constant(data_->ell, c % data_->ell)); }
FqElement ResidueField::from_poly(const FpPoly& rep) const { return FqElement(*this, rep); }
FqElement ResidueField::generator() const { return FqElement(*this, FpPoly::monomial(data_->ell, 1, 1)); }

bool operator==(const ResidueField& a, const ResidueField& b) {
  return a.data_ == b.data_ || (a.data_->ell == b.data_->ell && a.data_->defining == b.data_->defining);
}

FqElement::FqElement(ResidueField field, FpPoly rep) : field_(std::move(field)), rep_(std::move(rep)) {
  if (rep_.modulus() != field_.characteristic()) throw Error(ErrorKind::Precondition, "element has the wrong characteristic");
  rep_ = rem(rep_, field_.defining());
}

namespace {

void require_same_field(const FqElement& a, const FqElement& b) {
  if (!(a.field() == b.field())) throw Error(ErrorKind::Precondition, "elements of different residue fields");
}

}  // namespace

bool operator==(const FqElement& a, const FqElement& b) { return a.field_ == b.field_ && a.rep_ == b.rep_; }

FqElement operator+(const FqElement& a, const FqElement& b) {
  require_same_field(a, b);
  return FqElement(a.field(), a.rep() + b.rep());
}

FqElement operator-(const FqElement& a, const FqElement& b) {
  require_same_field(a, b);
  return FqElement(a.field(), a.rep() - b.rep());
}

FqElement operator-(const FqElement& a) { return FqElement(a.field(), -a.rep()); }

FqElement operator*(const FqElement& a, const FqElement& b) {
  require_same_field(a, b);
  return FqElement(a.field(), a.rep() * b.rep());
}

FqElement FqElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::Precondition, "zero has no inverse");
  // Extended Euclid on (rep, defining); only the rep cofactor is tracked.
  const u64 p = field_.characteristic();
  FpPoly r0 = field_.defining(), r1 = rep_;
  FpPoly s0(p), s1 = FpPoly::constant(p, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    FpPoly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant since the defining polynomial is irreducible.
  return FqElement(field_, scale(s0, inv_mod(r0.coeff(0), p)));
}

FqElement FqElement::pow(const mpz_class& exp) const {
  if (exp < 0) return inverse().pow(-exp);
  return FqElement(field_, pow_mod(rep_, exp, field_.defining()));
}

FqElement operator/(const FqElement& a, const FqElement& b) { return a * b.inverse(); }

FqElement frobenius(const FqElement& x) { return x.pow(mpz_class(static_cast<unsigned long>(x.field().characteristic()))); }

std::string to_string(const FqElement& x, char var) { return to_string(x.rep(), var); }

// ---------------------------------------------------------------- FqPoly

namespace {

using Coeffs = std::vector<FqElement>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

}  // namespace

FqPoly::FqPoly(ResidueField field, std::vector<FqElement> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!(c.field() == field_)) throw Error(ErrorKind::Precondition, "coefficient from a different field");
  }
  trim(coeffs_);
}

FqPoly FqPoly::lift(const ResidueField& field, const FpPoly& p) {
  Coeffs c;
  for (u64 x : p.coeffs()) c.push_back(field.from_int(x));
  return FqPoly(field, std::move(c));
}

FqElement FqPoly::eval(const FqElement& x) const {
  FqElement acc = field_.zero();
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

struct QPoly {
  ResidueField field;
  Coeffs c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
};

QPoly qsub(const QPoly& a, const QPoly& b) {
  Coeffs out(std::max(a.c.size(), b.c.size()), a.field.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] - b.c[i];
  trim(out);
  return {a.field, std::move(out)};
}

QPoly qadd(const QPoly& a, const QPoly& b) {
  Coeffs out(std::max(a.c.size(), b.c.size()), a.field.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] + b.c[i];
  trim(out);
  return {a.field, std::move(out)};
}

QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {a.field, {}};
  Coeffs out(a.c.size() + b.c.size() - 1, a.field.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] = out[i + j] + a.c[i] * b.c[j];
  }
  trim(out);
  return {a.field, std::move(out)};
}

std::pair<QPoly, QPoly> qdivmod(const QPoly& a, const QPoly& b) {
  if (a.degree() < b.degree()) return {{a.field, {}}, a};
  Coeffs r = a.c;
  const std::size_t db = b.c.size() - 1;
  const FqElement lead_inv = b.c.back().inverse();
  Coeffs q(r.size() - db, a.field.zero());
  for (std::size_t i = r.size(); i-- > db;) {
    FqElement coef = r[i] * lead_inv;
    q[i - db] = coef;
    if (coef.is_zero()) continue;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = r[i - db + j] - coef * b.c[j];
  }
  r.resize(db, a.field.zero());
  trim(r);
  trim(q);
  return {{a.field, std::move(q)}, {a.field, std::move(r)}};
}

QPoly qrem(const QPoly& a, const QPoly& m) { return a.degree() < m.degree() ? a : qdivmod(a, m).second; }

QPoly qmonic(const QPoly& a) {
  if (a.is_zero()) return a;
  const FqElement inv = a.c.back().inverse();
  Coeffs out;
  for (const auto& x : a.c) out.push_back(x * inv);
  return {a.field, std::move(out)};
}

QPoly qgcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = qrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return qmonic(a);
}

QPoly qpow_mod(const QPoly& base, const mpz_class& exp, const QPoly& m) {
  QPoly result = qrem({base.field, {base.field.one()}}, m);
  QPoly b = qrem(base, m);
  const std::size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = qrem(qmul(result, result), m);
    if (mpz_tstbit(exp.get_mpz_t(), i)) result = qrem(qmul(result, b), m);
  }
  return result;
}

FqElement random_element(const ResidueField& field, Rng& rng) {
  std::uniform_int_distribution<u64> dist(0, field.characteristic() - 1);
  std::vector<u64> c(static_cast<std::size_t>(field.degree()));
  for (auto& x : c) x = dist(rng);
  return field.from_poly(FpPoly(field.characteristic(), std::move(c)));
}

// g is monic, squarefree, and splits into distinct linear factors.
void split_linear(const QPoly& g, const mpz_class& q, Rng& rng, std::vector<FqElement>& roots) {
  if (g.degree() < 1) return;
  if (g.degree() == 1) {
    roots.push_back(-g.c[0]);
    return;
  }
  const ResidueField& field = g.field;
  const bool even = field.characteristic() == 2;
  const mpz_class half = (q - 1) / 2;
  for (;;) {
    const FqElement delta = random_element(field, rng);
    QPoly probe(field, {});
    if (even) {
      // Absolute trace of delta*x: sum of (delta*x)^(2^i), i < degree.
      QPoly t = qrem({field, {field.zero(), delta}}, g);
      probe = t;
      for (int i = 1; i < field.degree(); ++i) {
        t = qrem(qmul(t, t), g);
        probe = qadd(probe, t);
      }
    } else {
      probe = qsub(qpow_mod({field, {delta, field.one()}}, half, g), {field, {field.one()}});
    }
    QPoly d = qgcd(probe, g);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, q, rng, roots);
      split_linear(qdivmod(g, d).first, q, rng, roots);
      return;
    }
  }
}

}  // namespace

std::vector<FqElement> fq_roots(const FqPoly& p, Rng& rng) {
  if (p.is_zero()) throw Error(ErrorKind::Precondition, "fq_roots of the zero polynomial");
  const ResidueField& field = p.field();
  QPoly f = qmonic({field, p.coeffs()});
  if (f.degree() < 1) return {};
  const mpz_class q = field.order();
  const QPoly x{field, {field.zero(), field.one()}};
  QPoly g = qgcd(qsub(qpow_mod(x, q, f), x), f);
  std::vector<FqElement> roots;
  split_linear(g, q, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<FqElement> fq_roots(const FqPoly& p) {
  Rng rng(kDefaultSeed);
  return fq_roots(p, rng);
}

}  // namespace galdef::ff
