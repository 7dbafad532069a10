#pragma once

// Shared helpers for the test suites: fixture loading, synthetic congruent
// forms and brute-force oracles.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "galdef/modform.hpp"

namespace galdef::support {

using ff::u64;

inline std::filesystem::path fixture_dir() { return GALDEF_FIXTURE_DIR; }

inline Json fixture_json(const std::string& name) {
  std::ifstream in(fixture_dir() / name);
  return Json::parse(in);
}

inline mf::NewformPtr fixture(const std::string& name) {
  return std::make_shared<const mf::Newform>(mf::load_newform(fixture_dir() / name));
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"49a1.json", "delta.json", "11.3.d.a.json", "11.3.b.a.json"};
  return names;
}

/// Integer value of a rational eigenvalue stored as {num: [x], den: 1}.
inline long long rational_an(const Json& record, u64 n) {
  return record["an"][n - 1]["num"][0].get<long long>();
}

inline bool brute_is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Smallest prime factor of each index in [0, n].
inline std::vector<u64> spf_sieve(u64 n) {
  std::vector<u64> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    for (u64 j = i; j <= n; j += i) {
      if (!spf[j]) spf[j] = i;
    }
  }
  return spf;
}

/// Rebuild a_n for composite n from prime-power values by multiplicativity.
inline void rebuild_composites(Json& record, u64 bound) {
  const auto spf = spf_sieve(bound);
  const int deg = static_cast<int>(record["field_poly"].size()) - 1;
  const Json poly = record["field_poly"];
  auto field = nf::make_field([&] {
    std::vector<nf::Integer> g;
    for (const auto& c : poly) g.emplace_back(c.get<long>());
    return g;
  }());
  auto element = [&](u64 n) {
    const Json& e = record["an"][n - 1];
    std::vector<nf::Integer> num;
    for (const auto& c : e["num"]) num.emplace_back(c.is_string() ? c.get<std::string>() : std::to_string(c.get<long long>()));
    const Json& d = e["den"];
    return nf::AlgebraicNumber(field, num, nf::Integer(d.is_string() ? d.get<std::string>() : std::to_string(d.get<long long>())));
  };
  for (u64 n = 2; n <= bound; ++n) {
    const u64 p = spf[n];
    u64 q = 1, m = n;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    if (m == 1) continue;
    const nf::AlgebraicNumber v = element(q) * element(m);
    Json e;
    e["num"] = Json::array();
    for (int i = 0; i < deg; ++i) e["num"].push_back(v.numerator()[static_cast<std::size_t>(i)].get_str());
    e["den"] = v.denominator().get_str();
    record["an"][n - 1] = e;
  }
}

/// Copy of `base` whose prime-power eigenvalues are shifted by
/// scale * (random integer vector). With scale = ell the copy is congruent to
/// base at every prime above ell.
inline Json perturbed_record(const Json& base, const std::string& label, long long scale, std::mt19937_64& rng) {
  Json g = base;
  g["label"] = label;
  const u64 bound = g["an"].size();
  const auto spf = spf_sieve(bound);
  std::uniform_int_distribution<long long> dist(1, 1000000);
  for (u64 n = 2; n <= bound; ++n) {
    u64 m = n;
    while (m % spf[n] == 0) m /= spf[n];
    if (m != 1) continue;
    Json& e = g["an"][n - 1];
    const nf::Integer den(e["den"].is_string() ? e["den"].get<std::string>() : std::to_string(e["den"].get<long long>()));
    for (auto& c : e["num"]) {
      nf::Integer x(c.is_string() ? c.get<std::string>() : std::to_string(c.get<long long>()));
      x += den * static_cast<long>(scale) * static_cast<long>(dist(rng));
      c = x.get_str();
    }
  }
  rebuild_composites(g, bound);
  return g;
}

/// Copy of `base` with a_p (and the composites it touches) shifted by `delta`
/// in the first coordinate.
inline Json shifted_at_prime(const Json& base, const std::string& label, u64 p, long long delta) {
  Json g = base;
  g["label"] = label;
  Json& e = g["an"][p - 1];
  const nf::Integer den(e["den"].is_string() ? e["den"].get<std::string>() : std::to_string(e["den"].get<long long>()));
  Json& c = e["num"][0];
  nf::Integer x(c.is_string() ? c.get<std::string>() : std::to_string(c.get<long long>()));
  x += den * static_cast<long>(delta);
  c = x.get_str();
  rebuild_composites(g, g["an"].size());
  return g;
}

}  // namespace galdef::support
