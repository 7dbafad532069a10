#include "galdef/modform.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "galdef/errors.hpp"

namespace galdef::mf {

// ------------------------------------------------------------ integer utils

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p <= n / p; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

unsigned valuation(u64 n, u64 p) {
  if (n == 0 || p < 2) return 0;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 p = std::max<u64>(lo, 2); p <= hi; ++p) {
    if (ff::is_prime(p)) out.push_back(p);
  }
  return out;
}

namespace {

u64 euler_phi_prime_power(u64 q, unsigned e) {
  u64 pk = 1;
  for (unsigned i = 1; i < e; ++i) pk *= q;
  return pk * (q - 1);
}

bool is_power_of(u64 n, u64 p) {
  while (n > 1 && n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

// ------------------------------------------------------------- characters

DirichletCharacter::DirichletCharacter(u64 modulus, u64 conductor, std::vector<LocalComponent> components,
                                       std::map<u64, AlgebraicNumber> values, FieldPtr field)
    : modulus_(modulus),
      conductor_(conductor),
      components_(std::move(components)),
      values_(std::move(values)),
      field_(std::move(field)),
      order_(1) {
  for (const auto& c : components_) order_ = lcm(order_, c.order);
}

DirichletCharacter DirichletCharacter::trivial(FieldPtr field) { return DirichletCharacter(1, 1, {}, {}, std::move(field)); }

AlgebraicNumber DirichletCharacter::at_prime(u64 p) const {
  if (modulus_ % p == 0) return AlgebraicNumber::from_integer(field_, 0);
  if (is_trivial()) return AlgebraicNumber::from_integer(field_, 1);
  auto it = values_.find(p);
  if (it == values_.end()) {
    throw Error(ErrorKind::InsufficientPrecision, "character value at " + std::to_string(p) + " is not stored",
                "char.values." + std::to_string(p));
  }
  return it->second;
}

u64 character_reduction_conductor(const DirichletCharacter& omega, u64 ell) {
  if (omega.modulus() % ell == 0) {
    throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the character modulus");
  }
  u64 out = 1;
  for (const auto& c : omega.components()) {
    if (is_power_of(c.order, ell)) continue;
    for (unsigned i = 0; i < c.e; ++i) out *= c.q;
  }
  return out;
}

const AlgebraicNumber& Newform::a(u64 n) const {
  if (n == 0 || n > eigenvalues.size()) {
    throw Error(ErrorKind::InsufficientPrecision,
                label + ": a_" + std::to_string(n) + " beyond stored bound " + std::to_string(eigenvalues.size()), "an");
  }
  return eigenvalues[n - 1];
}

// ----------------------------------------------------------------- ingest

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) { throw Error(ErrorKind::Schema, msg, path); }

[[noreturn]] void violation(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InvariantViolation, msg, path);
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

nf::Integer parse_integer(const Json& v, const std::string& path) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return nf::Integer(std::to_string(v.get<std::uint64_t>()));
    return nf::Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || !std::all_of(s.begin() + static_cast<long>(start), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      schema(path, "expected a decimal integer string, got \"" + s + "\"");
    }
    return nf::Integer(s[0] == '+' ? s.substr(1) : s);
  }
  schema(path, "expected an integer");
}

u64 parse_u64(const Json& v, const std::string& path, u64 min_value = 0) {
  const nf::Integer n = parse_integer(v, path);
  if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 63) schema(path, "integer out of range");
  const u64 out = std::stoull(n.get_str());
  if (out < min_value) violation(path, "must be at least " + std::to_string(min_value));
  return out;
}

AlgebraicNumber parse_element(const Json& v, const FieldPtr& field, const std::string& path) {
  const Json& num = member(v, "num", path);
  const Json& den = member(v, "den", path);
  if (!num.is_array()) schema(join(path, "num"), "expected an array");
  if (num.size() != static_cast<std::size_t>(field->degree())) {
    schema(join(path, "num"), "expected " + std::to_string(field->degree()) + " coordinates, got " + std::to_string(num.size()));
  }
  std::vector<nf::Integer> coords;
  coords.reserve(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) coords.push_back(parse_integer(num[i], join(path, "num") + "[" + std::to_string(i) + "]"));
  const nf::Integer d = parse_integer(den, join(path, "den"));
  if (d <= 0) violation(join(path, "den"), "denominator must be positive");
  return AlgebraicNumber(field, std::move(coords), d);
}

DirichletCharacter parse_character(const Json& v, const FieldPtr& field, u64 level, u64 stored_bound) {
  const std::string path = "char";
  const u64 modulus = parse_u64(member(v, "modulus", path), "char.modulus", 1);
  const u64 conductor = parse_u64(member(v, "conductor", path), "char.conductor", 1);
  if (modulus % conductor != 0) violation("char.conductor", "conductor must divide the modulus");
  if (level % modulus != 0) violation("char.modulus", "modulus must divide the level");

  const Json& comps = member(v, "components", path);
  if (!comps.is_array()) schema("char.components", "expected an array");
  std::vector<LocalComponent> components;
  u64 conductor_from_components = 1;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cp = "char.components[" + std::to_string(i) + "]";
    LocalComponent c{parse_u64(member(comps[i], "q", cp), cp + ".q", 2),
                     static_cast<unsigned>(parse_u64(member(comps[i], "e", cp), cp + ".e", 1)),
                     parse_u64(member(comps[i], "order", cp), cp + ".order", 1)};
    if (!ff::is_prime(c.q)) violation(cp + ".q", std::to_string(c.q) + " is not prime");
    for (const auto& prev : components) {
      if (prev.q == c.q) violation(cp + ".q", "duplicate local component");
    }
    u64 qe = 1;
    for (unsigned k = 0; k < c.e; ++k) qe *= c.q;
    if (modulus % qe != 0) violation(cp + ".e", "q^e must divide the modulus");
    if (euler_phi_prime_power(c.q, c.e) % c.order != 0) violation(cp + ".order", "order must divide phi(q^e)");
    if (c.order > 1) conductor_from_components *= qe;
    components.push_back(c);
  }
  if (conductor_from_components != conductor) {
    violation("char.conductor", "conductor " + std::to_string(conductor) + " disagrees with the nontrivial components (" +
                                    std::to_string(conductor_from_components) + ")");
  }

  std::map<u64, AlgebraicNumber> values;
  if (auto it = v.find("values"); it != v.end() && !it->is_null()) {
    if (!it->is_object()) schema("char.values", "expected an object keyed by prime");
    for (const auto& [key, val] : it->items()) {
      const std::string vp = "char.values." + key;
      if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        schema(vp, "key must be a decimal prime");
      }
      const u64 p = std::stoull(key);
      if (!ff::is_prime(p)) violation(vp, key + " is not prime");
      if (modulus % p == 0) violation(vp, "value stored at a prime dividing the modulus");
      values.emplace(p, parse_element(val, field, vp));
    }
  }

  DirichletCharacter chi(modulus, conductor, std::move(components), std::move(values), field);
  if (!chi.is_trivial()) {
    for (u64 p : primes_in_range(2, stored_bound)) {
      if (modulus % p == 0) continue;
      if (!chi.values().count(p)) violation("char.values." + std::to_string(p), "missing value at a prime within the stored range");
    }
  }
  const AlgebraicNumber one = AlgebraicNumber::from_integer(field, 1);
  for (const auto& [p, val] : chi.values()) {
    if (!(val.pow(static_cast<unsigned>(chi.order())) == one)) {
      violation("char.values." + std::to_string(p), "value is not a root of unity of order dividing " + std::to_string(chi.order()));
    }
  }
  return chi;
}

// Multiplicativity on coprime index pairs; small factor capped to bound cost.
void check_multiplicative(const std::vector<AlgebraicNumber>& an) {
  const u64 bound = an.size();
  for (u64 m = 2; m <= 64 && m * (m + 1) <= bound; ++m) {
    for (u64 n = m + 1; m * n <= bound; ++n) {
      if (gcd(m, n) != 1) continue;
      if (!(an[m * n - 1] == an[m - 1] * an[n - 1])) {
        violation("an[" + std::to_string(m * n - 1) + "]",
                  "a_" + std::to_string(m * n) + " != a_" + std::to_string(m) + " * a_" + std::to_string(n));
      }
    }
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open " + path.string(), path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what(), path.string());
  }
}

}  // namespace

Newform ingest(const Json& record) {
  if (!record.is_object()) schema("", "newform record must be an object");
  const Json& label = member(record, "label", "");
  if (!label.is_string()) schema("label", "expected a string");
  const u64 level = parse_u64(member(record, "level", ""), "level", 1);
  const u64 weight_raw = parse_u64(member(record, "weight", ""), "weight", 2);
  if (weight_raw > 100000) violation("weight", "weight out of supported range");
  const int weight = static_cast<int>(weight_raw);

  const Json& poly = member(record, "field_poly", "");
  if (!poly.is_array() || poly.size() < 2) schema("field_poly", "expected an array of at least two integers");
  std::vector<nf::Integer> g;
  for (std::size_t i = 0; i < poly.size(); ++i) g.push_back(parse_integer(poly[i], "field_poly[" + std::to_string(i) + "]"));
  if (g.back() != 1) violation("field_poly", "defining polynomial must be monic");
  FieldPtr field = nf::make_field(std::move(g));

  const Json& an = member(record, "an", "");
  if (!an.is_array() || an.empty()) schema("an", "expected a nonempty array");
  std::vector<AlgebraicNumber> eigenvalues;
  eigenvalues.reserve(an.size());
  for (std::size_t i = 0; i < an.size(); ++i) eigenvalues.push_back(parse_element(an[i], field, "an[" + std::to_string(i) + "]"));
  if (!(eigenvalues[0] == AlgebraicNumber::from_integer(field, 1))) violation("an[0]", "a_1 must equal 1");
  check_multiplicative(eigenvalues);

  DirichletCharacter chi = parse_character(member(record, "char", ""), field, level, eigenvalues.size());

  std::optional<u64> complete;
  if (auto it = record.find("complete_gallery_for"); it != record.end() && !it->is_null()) {
    complete = parse_u64(*it, "complete_gallery_for", 1);
  }

  Newform f{label.get<std::string>(), level, weight, std::move(chi), field, std::move(eigenvalues), false, complete};
  f.insufficient_precision = f.precision() < sturm_bound(level, weight);
  return f;
}

Newform load_newform(const std::filesystem::path& path) { return ingest(read_json_file(path)); }

Gallery gallery_from_json(const Json& doc) {
  Gallery out;
  const Json* forms = &doc;
  std::optional<u64> declared;
  if (doc.is_object()) {
    forms = &member(doc, "forms", "");
    if (auto it = doc.find("complete_for_level"); it != doc.end() && !it->is_null()) {
      declared = parse_u64(*it, "complete_for_level", 1);
    }
  }
  if (!forms->is_array()) schema("forms", "expected an array of newform records");
  for (std::size_t i = 0; i < forms->size(); ++i) {
    try {
      out.forms.push_back(std::make_shared<const Newform>(ingest((*forms)[i])));
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), "forms[" + std::to_string(i) + "]" + (e.field().empty() ? "" : "." + e.field()));
    }
  }
  if (!declared) {
    for (std::size_t i = 0; i < out.forms.size(); ++i) {
      const auto& c = out.forms[i]->complete_gallery_for;
      if (!c) continue;
      if (declared && *declared != *c) {
        schema("forms[" + std::to_string(i) + "].complete_gallery_for", "records disagree on the completeness level");
      }
      declared = c;
    }
  }
  out.complete_for_level = declared;
  if (declared) {
    for (std::size_t i = 0; i < out.forms.size(); ++i) {
      if (*declared % out.forms[i]->level != 0) {
        violation("forms[" + std::to_string(i) + "].level",
                  "level " + std::to_string(out.forms[i]->level) + " does not divide the completeness level " + std::to_string(*declared));
      }
    }
  }
  return out;
}

Gallery load_gallery(const std::filesystem::path& path) { return gallery_from_json(read_json_file(path)); }

// ------------------------------------------------------------ Sturm bound

u64 gamma1_index(u64 level) {
  if (level <= 2) return 1;
  unsigned __int128 x = 1;
  u64 n = level;
  for (u64 p : prime_divisors(level)) {
    const unsigned e = valuation(n, p);
    for (unsigned i = 0; i + 1 < e; ++i) x *= static_cast<unsigned __int128>(p) * p;
    x *= static_cast<unsigned __int128>(p) * p - 1;
  }
  return static_cast<u64>(x / 2);
}

u64 sturm_bound(u64 level, int weight) {
  const unsigned __int128 num = static_cast<unsigned __int128>(gamma1_index(level)) * static_cast<unsigned>(weight);
  return static_cast<u64>((num + 11) / 12);
}

// ------------------------------------------------------------- reductions

std::vector<LambdaReduction> reductions(const Newform& f, u64 ell, u64 bound) {
  if (!ff::is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime");
  if (f.level % ell == 0) {
    throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the level " + std::to_string(f.level));
  }
  if (bound > f.precision()) {
    throw Error(ErrorKind::InsufficientPrecision,
                f.label + " stores " + std::to_string(f.precision()) + " coefficients, " + std::to_string(bound) + " needed", "an");
  }
  std::vector<LambdaReduction> out;
  for (auto& lambda : nf::primes_above(f.field, ell)) {
    LambdaReduction r{lambda, {}, {}};
    r.values.reserve(bound);
    if (lambda.indeterminate()) {
      r.indeterminate_reason = std::string(lambda.ramified ? "ramified" : "index-warning") + " prime above " + std::to_string(ell);
      r.values.assign(bound, std::nullopt);
    } else {
      for (u64 n = 1; n <= bound; ++n) {
        try {
          r.values.push_back(nf::reduce(f.a(n), lambda));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DenominatorNotInvertible) throw;
          r.values.push_back(std::nullopt);
          if (r.indeterminate_reason.empty()) r.indeterminate_reason = e.what();
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<LambdaReduction> reductions(const Newform& f, u64 ell) { return reductions(f, ell, sturm_bound(f.level, f.weight)); }

// ------------------------------------------------------------- congruence

std::string_view to_string(EmbeddingDirection d) {
  switch (d) {
    case EmbeddingDirection::GIntoF: return "g_into_f";
    case EmbeddingDirection::FIntoG: return "f_into_g";
    case EmbeddingDirection::CommonExtension: return "common_extension";
  }
  return "unknown";
}

u64 congruence_bound(const Newform& f, const Newform& g) { return sturm_bound(lcm(f.level, g.level), std::max(f.weight, g.weight)); }

namespace {

// Image of x under the embedding sending the generator of x's field to root.
ff::FqElement embed(const ff::FqElement& x, const ff::FqElement& root) {
  const ff::ResidueField& target = root.field();
  ff::FqElement acc = target.zero();
  const auto& c = x.rep().coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * root + target.from_int(*it);
  return acc;
}

std::vector<u64> comparison_indices(u64 bound, u64 ell, u64 level_f, u64 level_g) {
  std::vector<u64> out;
  for (u64 n = 1; n <= bound; ++n) {
    if (gcd(n, ell) == 1 && gcd(n, level_f) == 1 && gcd(n, level_g) == 1) out.push_back(n);
  }
  return out;
}

// Roots of `source`'s defining polynomial in target, as Frobenius orbit of
// the smallest one.
std::vector<ff::FqElement> embedding_roots(const ff::ResidueField& source, const ff::ResidueField& target) {
  const auto roots = ff::fq_roots(ff::FqPoly::lift(target, source.defining()));
  if (roots.empty()) return {};
  std::vector<ff::FqElement> orbit{roots.front()};
  for (int j = 1; j < source.degree(); ++j) orbit.push_back(ff::frobenius(orbit.back()));
  return orbit;
}

bool all_match(const std::vector<u64>& idx, const LambdaReduction& rf, const LambdaReduction& rg,
               const std::optional<ff::FqElement>& f_root, const std::optional<ff::FqElement>& g_root) {
  for (u64 n : idx) {
    const ff::FqElement a = f_root ? embed(*rf.values[n - 1], *f_root) : *rf.values[n - 1];
    const ff::FqElement b = g_root ? embed(*rg.values[n - 1], *g_root) : *rg.values[n - 1];
    if (!(a == b)) return false;
  }
  return true;
}

std::optional<std::string> missing_reason(const LambdaReduction& r, const std::vector<u64>& idx) {
  if (r.prime.indeterminate()) return r.indeterminate_reason;
  for (u64 n : idx) {
    if (!r.values[n - 1]) return r.indeterminate_reason;
  }
  return std::nullopt;
}

}  // namespace

CongruenceResult compare_forms(const Newform& f, const Newform& g, u64 ell, ff::Rng& rng) {
  if (!ff::is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime");
  if (lcm(f.level, g.level) % ell == 0) {
    throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the level of " + f.label + " or " + g.label);
  }
  const u64 bound = congruence_bound(f, g);
  const auto rf = reductions(f, ell, bound);
  const auto rg = reductions(g, ell, bound);
  const auto idx = comparison_indices(bound, ell, f.level, g.level);

  CongruenceResult out;
  for (const auto& lf : rf) {
    for (const auto& lg : rg) {
      const std::pair<std::size_t, std::size_t> key{lf.prime.index, lg.prime.index};
      if (auto why = missing_reason(lf, idx)) {
        out.unresolved.emplace_back(key, f.label + ": " + *why);
        continue;
      }
      if (auto why = missing_reason(lg, idx)) {
        out.unresolved.emplace_back(key, g.label + ": " + *why);
        continue;
      }
      const ff::ResidueField& kf = lf.prime.residue_field;
      const ff::ResidueField& kg = lg.prime.residue_field;
      const int df = kf.degree(), dg = kg.degree();
      CongruenceWitness base{g.label, key.first, key.second, EmbeddingDirection::GIntoF, {}, {}, {}, 0, bound, idx.size()};

      if (df % dg == 0) {
        base.target_field = kf.defining().coeffs();
        const auto orbit = embedding_roots(kg, kf);
        for (std::size_t j = 0; j < orbit.size(); ++j) {
          if (!all_match(idx, lf, lg, std::nullopt, orbit[j])) continue;
          CongruenceWitness w = base;
          w.source_root = orbit[j].rep().coeffs();
          w.frobenius_power = static_cast<unsigned>(j);
          out.witnesses.push_back(std::move(w));
        }
      } else if (dg % df == 0) {
        base.direction = EmbeddingDirection::FIntoG;
        base.target_field = kg.defining().coeffs();
        const auto orbit = embedding_roots(kf, kg);
        for (std::size_t j = 0; j < orbit.size(); ++j) {
          if (!all_match(idx, lf, lg, orbit[j], std::nullopt)) continue;
          CongruenceWitness w = base;
          w.source_root = orbit[j].rep().coeffs();
          w.frobenius_power = static_cast<unsigned>(j);
          out.witnesses.push_back(std::move(w));
        }
      } else {
        base.direction = EmbeddingDirection::CommonExtension;
        const int L = std::lcm(df, dg);
        const ff::ResidueField big = ff::ResidueField::make(ell, ff::random_irreducible(ell, L, rng));
        base.target_field = big.defining().coeffs();
        const auto f_orbit = embedding_roots(kf, big);
        const auto g_orbit = embedding_roots(kg, big);
        base.f_root = f_orbit.front().rep().coeffs();
        for (std::size_t j = 0; j < g_orbit.size(); ++j) {
          if (!all_match(idx, lf, lg, f_orbit.front(), g_orbit[j])) continue;
          CongruenceWitness w = base;
          w.source_root = g_orbit[j].rep().coeffs();
          w.frobenius_power = static_cast<unsigned>(j);
          out.witnesses.push_back(std::move(w));
        }
      }
    }
  }
  return out;
}

std::vector<CongruenceWitness> congruent_mod(const Newform& f, const Newform& g, u64 ell, ff::Rng& rng) {
  CongruenceResult r = compare_forms(f, g, ell, rng);
  if (r.witnesses.empty() && !r.unresolved.empty()) {
    throw Error(ErrorKind::IndeterminateReduction, "congruence of " + f.label + " and " + g.label + " mod " +
                                                       std::to_string(ell) + " undecided: " + r.unresolved.front().second);
  }
  return std::move(r.witnesses);
}

bool replay_congruence(const Newform& f, const Newform& g, u64 ell, const CongruenceWitness& w) {
  if (w.other_label != g.label) return false;
  if (w.bound != congruence_bound(f, g)) return false;
  const auto pf = nf::primes_above(f.field, ell);
  const auto pg = nf::primes_above(g.field, ell);
  if (w.lambda_f >= pf.size() || w.lambda_g >= pg.size()) return false;
  const auto& lf = pf[w.lambda_f];
  const auto& lg = pg[w.lambda_g];
  if (lf.indeterminate() || lg.indeterminate()) return false;

  const ff::ResidueField target = ff::ResidueField::make(ell, ff::FpPoly(ell, w.target_field));
  const ff::ResidueField& source = w.direction == EmbeddingDirection::FIntoG ? lf.residue_field : lg.residue_field;
  const ff::FqElement root = target.from_poly(ff::FpPoly(ell, w.source_root));
  if (!ff::FqPoly::lift(target, source.defining()).eval(root).is_zero()) return false;
  const auto orbit = embedding_roots(source, target);
  if (w.frobenius_power >= orbit.size() || !(orbit[w.frobenius_power] == root)) return false;

  std::optional<ff::FqElement> f_root, g_root;
  switch (w.direction) {
    case EmbeddingDirection::GIntoF:
      if (!(target == lf.residue_field)) return false;
      g_root = root;
      break;
    case EmbeddingDirection::FIntoG:
      if (!(target == lg.residue_field)) return false;
      f_root = root;
      break;
    case EmbeddingDirection::CommonExtension: {
      const ff::FqElement fr = target.from_poly(ff::FpPoly(ell, w.f_root));
      if (!ff::FqPoly::lift(target, lf.residue_field.defining()).eval(fr).is_zero()) return false;
      f_root = fr;
      g_root = root;
      break;
    }
  }
  const auto idx = comparison_indices(w.bound, ell, f.level, g.level);
  if (idx.size() != w.indices_compared) return false;
  for (u64 n : idx) {
    const ff::FqElement a = nf::reduce(f.a(n), lf);
    const ff::FqElement b = nf::reduce(g.a(n), lg);
    const ff::FqElement ia = f_root ? embed(a, *f_root) : a;
    const ff::FqElement ib = g_root ? embed(b, *g_root) : b;
    if (!(ia == ib)) return false;
  }
  return true;
}

std::vector<NewformPtr> comparison_set(const Newform& f, const Gallery& gallery) {
  if (!gallery.complete_for_level) throw Error(ErrorKind::GalleryIncomplete, "gallery carries no completeness declaration");
  if (*gallery.complete_for_level % f.level != 0) {
    throw Error(ErrorKind::GalleryIncomplete, "gallery is complete for level " + std::to_string(*gallery.complete_for_level) +
                                                  ", which is not a multiple of " + std::to_string(f.level));
  }
  std::vector<NewformPtr> out;
  for (const auto& g : gallery.forms) {
    if (g->label == f.label || f.level % g->level != 0 || g->weight != f.weight) continue;
    out.push_back(g);
  }
  return out;
}

CongruencePrimes congruence_primes(const Newform& f, const Gallery& gallery, const std::vector<u64>& ells, ff::Rng& rng) {
  const auto members = comparison_set(f, gallery);
  CongruencePrimes out;
  for (u64 ell : ells) {
    if (!ff::is_prime(ell) || f.level % ell == 0) continue;
    bool unresolved = false;
    for (const auto& g : members) {
      const CongruenceResult r = compare_forms(f, *g, ell, rng);
      if (!r.witnesses.empty()) {
        out.primes.insert(ell);
        break;
      }
      unresolved = unresolved || !r.unresolved.empty();
    }
    if (unresolved && !out.primes.count(ell)) out.unresolved.insert(ell);
  }
  return out;
}

}  // namespace galdef::mf
