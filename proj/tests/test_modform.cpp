#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "galdef/errors.hpp"
#include "galdef/modform.hpp"
#include "support.hpp"

using namespace galdef;
using ff::u64;

namespace {

struct Failure {
  ErrorKind kind;
  std::string field;
};

Failure ingest_failure(const Json& record) {
  try {
    mf::ingest(record);
  } catch (const Error& e) {
    return {e.kind(), e.field()};
  }
  ADD_FAILURE() << "record was accepted";
  return {ErrorKind::Precondition, ""};
}

// Number of (c, d) in (Z/N)^2 generating Z/N, i.e. N^2 prod (1 - p^-2).
u64 count_primitive_pairs(u64 n) {
  u64 count = 0;
  for (u64 c = 0; c < n; ++c) {
    for (u64 d = 0; d < n; ++d) {
      if (std::gcd(std::gcd(c, d), n) == 1) ++count;
    }
  }
  return count;
}

u64 sigma(u64 n, unsigned k, u64 mod) {
  u64 s = 0;
  for (u64 d = 1; d <= n; ++d) {
    if (n % d == 0) s = (s + ff::pow_mod(d, k, mod)) % mod;
  }
  return s;
}

}  // namespace

TEST(Ingest, FixturesLoad) {
  for (const auto& name : support::fixture_names()) {
    const auto f = support::fixture(name);
    EXPECT_FALSE(f->insufficient_precision) << name;
    EXPECT_EQ(f->precision(), 250u);
  }
  const auto quartic = support::fixture("11.3.d.a.json");
  EXPECT_EQ(quartic->field->degree(), 4);
  EXPECT_EQ(quartic->character.conductor(), 11u);
  EXPECT_EQ(quartic->character.order(), 10u);
  EXPECT_EQ(quartic->a(2), nf::AlgebraicNumber::generator(quartic->field));
  const auto delta = support::fixture("delta.json");
  EXPECT_EQ(delta->a(13), nf::AlgebraicNumber::from_integer(delta->field, -577738));
}

TEST(Ingest, SchemaErrorsNameTheField) {
  const Json base = support::fixture_json("49a1.json");

  Json r = base;
  r.erase("label");
  auto f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::Schema);
  EXPECT_EQ(f.field, "label");

  r = base;
  r["an"][3]["num"] = Json::array({1, 2});
  f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::Schema);
  EXPECT_EQ(f.field, "an[3].num");

  r = base;
  r["an"][5]["den"] = "12x";
  f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::Schema);
  EXPECT_EQ(f.field, "an[5].den");

  r = base;
  r["weight"] = 2.5;
  EXPECT_EQ(ingest_failure(r).kind, ErrorKind::Schema);

  r = base;
  r["an"][1]["num"][0] = "12345678901234567890123";
  f = ingest_failure(r);  // big integers are accepted as strings; this one breaks multiplicativity
  EXPECT_EQ(f.kind, ErrorKind::InvariantViolation);
}

TEST(Ingest, InvariantViolations) {
  const Json base = support::fixture_json("49a1.json");
  Json r = base;
  r["an"][0]["num"][0] = 2;
  auto f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::InvariantViolation);
  EXPECT_EQ(f.field, "an[0]");

  r = base;
  r["an"][5]["num"][0] = 7;  // a_6 != a_2 a_3
  f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::InvariantViolation);
  EXPECT_EQ(f.field, "an[5]");

  r = base;
  r["field_poly"] = Json::array({-1, 0, 1});
  EXPECT_EQ(ingest_failure(r).kind, ErrorKind::InvariantViolation);

  const Json quartic = support::fixture_json("11.3.d.a.json");
  r = quartic;
  r["char"]["conductor"] = 1;
  f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::InvariantViolation);
  EXPECT_EQ(f.field, "char.conductor");

  r = quartic;
  r["char"]["components"][0]["order"] = 3;  // 3 does not divide phi(11)
  f = ingest_failure(r);
  EXPECT_EQ(f.field, "char.components[0].order");

  r = quartic;
  r["char"]["values"]["2"] = r["an"][2];  // a_3 is not a root of unity
  f = ingest_failure(r);
  EXPECT_EQ(f.kind, ErrorKind::InvariantViolation);
  EXPECT_EQ(f.field, "char.values.2");

  r = quartic;
  r["char"]["values"].erase("13");
  f = ingest_failure(r);
  EXPECT_EQ(f.field, "char.values.13");
}

TEST(Ingest, OrderFiveCharacterIsAccepted) {
  // A synthetic conductor-11 character of order 5 on the quartic field:
  // omega(p) = (omega_10(p))^2.
  Json r = support::fixture_json("11.3.d.a.json");
  const auto f = support::fixture("11.3.d.a.json");
  r["char"]["components"][0]["order"] = 5;
  for (auto& [key, val] : r["char"]["values"].items()) {
    const auto sq = f->character.at_prime(std::stoull(key)).pow(2);
    Json e;
    e["num"] = Json::array();
    for (const auto& c : sq.numerator()) e["num"].push_back(c.get_str());
    e["den"] = sq.denominator().get_str();
    val = e;
  }
  const auto g = mf::ingest(r);
  EXPECT_EQ(g.character.order(), 5u);
  EXPECT_EQ(mf::character_reduction_conductor(g.character, 5), 1u);
  EXPECT_EQ(mf::character_reduction_conductor(g.character, 3), 11u);
}

TEST(Ingest, InsufficientPrecisionIsFlagged) {
  Json r = support::fixture_json("49a1.json");
  r["an"] = Json(std::vector<Json>(r["an"].begin(), r["an"].begin() + 100));
  const auto f = mf::ingest(r);
  EXPECT_TRUE(f.insufficient_precision);
  EXPECT_THROW(mf::reductions(f, 11), Error);
}

TEST(Gallery, CompletenessAndLevels) {
  const auto g = mf::load_gallery(support::fixture_dir() / "gallery11.json");
  EXPECT_EQ(g.complete_for_level, 11u);
  EXPECT_EQ(g.forms.size(), 2u);
  const auto f = support::fixture("11.3.d.a.json");
  const auto members = mf::comparison_set(*f, g);
  ASSERT_EQ(members.size(), 1u);
  EXPECT_EQ(members[0]->label, "11.3.b.a");

  Json bare = Json::array({support::fixture_json("49a1.json")});
  const auto from_records = mf::gallery_from_json(bare);
  EXPECT_EQ(from_records.complete_for_level, 49u);

  Json wrong = Json::object({{"complete_for_level", 7}, {"forms", bare}});
  try {
    mf::gallery_from_json(wrong);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantViolation);
    EXPECT_EQ(e.field(), "forms[0].level");
  }

  mf::Gallery open{{f}, std::nullopt};
  try {
    mf::comparison_set(*f, open);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GalleryIncomplete);
  }
}

TEST(Sturm, IndexAgreesWithPrimitivePairCount) {
  for (u64 n = 3; n <= 60; ++n) EXPECT_EQ(mf::gamma1_index(n) * 2, count_primitive_pairs(n)) << n;
  EXPECT_EQ(mf::gamma1_index(1), 1u);
  EXPECT_EQ(mf::gamma1_index(2), 1u);
}

TEST(Sturm, KnownValues) {
  EXPECT_EQ(mf::gamma1_index(49), 1176u);
  EXPECT_EQ(mf::sturm_bound(49, 2), 196u);
  EXPECT_EQ(mf::sturm_bound(1, 12), 1u);
  EXPECT_EQ(mf::sturm_bound(11, 3), 15u);
}

TEST(Sturm, Monotone) {
  for (u64 n = 1; n <= 200; ++n) {
    for (int k = 2; k <= 12; ++k) {
      EXPECT_LE(mf::sturm_bound(n, k), mf::sturm_bound(n, k + 1));
      EXPECT_LE(mf::sturm_bound(n, k), mf::sturm_bound(2 * n, k));
      EXPECT_LE(mf::sturm_bound(n, k), mf::sturm_bound(3 * n, k));
    }
  }
}

TEST(Reductions, RamanujanCongruenceModulo691) {
  const auto delta = support::fixture("delta.json");
  const auto red = mf::reductions(*delta, 691, 250);
  ASSERT_EQ(red.size(), 1u);
  for (u64 n = 1; n <= 250; ++n) {
    ASSERT_TRUE(red[0].values[n - 1]);
    EXPECT_EQ(red[0].values[n - 1]->rep().coeff(0), sigma(n, 11, 691)) << n;
  }
}

TEST(Reductions, IndeterminateAtRamifiedPrime) {
  const auto f = support::fixture("11.3.d.a.json");
  const auto red = mf::reductions(*f, 5);
  ASSERT_EQ(red.size(), 1u);
  EXPECT_FALSE(red[0].indeterminate_reason.empty());
  EXPECT_FALSE(red[0].values[1]);
  EXPECT_THROW(mf::reductions(*f, 11), Error);
}

TEST(Congruence, SelfCongruenceAndSymmetry) {
  ff::Rng rng(3);
  const Json base = support::fixture_json("11.3.d.a.json");
  std::mt19937_64 gen(17);
  const auto f = support::fixture("11.3.d.a.json");
  const auto g = std::make_shared<const mf::Newform>(mf::ingest(support::perturbed_record(base, "g", 13, gen)));
  const auto fg = mf::compare_forms(*f, *g, 13, rng);
  const auto gf = mf::compare_forms(*g, *f, 13, rng);
  EXPECT_FALSE(fg.witnesses.empty());
  EXPECT_EQ(fg.witnesses.size(), gf.witnesses.size());
  for (const auto& w : fg.witnesses) EXPECT_TRUE(mf::replay_congruence(*f, *g, 13, w));
  for (const auto& w : gf.witnesses) EXPECT_TRUE(mf::replay_congruence(*g, *f, 13, w));

  // Every prime above 13 matches itself, under the identity embedding.
  const auto primes = nf::primes_above(f->field, 13);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const bool found = std::any_of(fg.witnesses.begin(), fg.witnesses.end(),
                                   [&](const auto& w) { return w.lambda_f == i && w.lambda_g == i && w.frobenius_power == 0; });
    EXPECT_TRUE(found) << i;
  }
}

TEST(Congruence, ConjugateFormsOverDifferentResidueDegrees) {
  // 11.3.b.a over Q against the quartic orbit: compared at split, inert and
  // mixed primes without building a compositum.
  ff::Rng rng(5);
  const auto f = support::fixture("11.3.d.a.json");
  const auto g = support::fixture("11.3.b.a.json");
  for (u64 ell : {2ULL, 3ULL, 7ULL, 13ULL, 19ULL, 31ULL, 41ULL}) {
    const auto r = mf::compare_forms(*f, *g, ell, rng);
    for (const auto& w : r.witnesses) EXPECT_TRUE(mf::replay_congruence(*f, *g, ell, w));
    EXPECT_TRUE(r.unresolved.empty());
  }
  const auto at5 = mf::compare_forms(*f, *g, 5, rng);
  EXPECT_TRUE(at5.witnesses.empty());
  EXPECT_FALSE(at5.unresolved.empty());
  EXPECT_THROW(mf::congruent_mod(*f, *g, 5, rng), Error);
}

TEST(Congruence, TamperedWitnessFailsReplay) {
  ff::Rng rng(3);
  std::mt19937_64 gen(23);
  const auto f = support::fixture("49a1.json");
  const auto g = std::make_shared<const mf::Newform>(mf::ingest(support::perturbed_record(support::fixture_json("49a1.json"), "g", 3, gen)));
  auto ws = mf::congruent_mod(*f, *g, 3, rng);
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_TRUE(mf::replay_congruence(*f, *g, 3, ws[0]));
  auto bad = ws[0];
  bad.indices_compared += 1;
  EXPECT_FALSE(mf::replay_congruence(*f, *g, 3, bad));
  bad = ws[0];
  bad.other_label = "other";
  EXPECT_FALSE(mf::replay_congruence(*f, *g, 3, bad));
}

TEST(Congruence, CommonExtensionWhenDegreesAreCoprime) {
  // Residue degrees 2 and 3 above ell force a common degree-6 extension.
  // Build both forms with constant-free eigenvalue systems congruent to an
  // integer system: a_n in Z for every n, so reductions live in F_ell.
  const Json base = support::fixture_json("49a1.json");
  auto lift = [&](const Json& poly, const std::string& label) {
    Json r = base;
    r["label"] = label;
    r["field_poly"] = poly;
    const std::size_t deg = poly.size() - 1;
    for (auto& e : r["an"]) {
      Json num = Json::array({e["num"][0]});
      for (std::size_t i = 1; i < deg; ++i) num.push_back(0);
      e["num"] = num;
    }
    return std::make_shared<const mf::Newform>(mf::ingest(r));
  };
  const u64 ell = 5;
  const auto f = lift(Json::array({2, 0, 1}), "quad");     // x^2 + 2 inert at 5
  const auto g = lift(Json::array({1, 1, 0, 1}), "cubic");  // x^3 + x + 1 inert at 5
  ASSERT_EQ(nf::primes_above(f->field, ell)[0].residue_degree(), 2);
  ASSERT_EQ(nf::primes_above(g->field, ell)[0].residue_degree(), 3);
  ff::Rng rng(9);
  const auto r = mf::compare_forms(*f, *g, ell, rng);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses[0].direction, mf::EmbeddingDirection::CommonExtension);
  EXPECT_EQ(r.witnesses[0].target_field.size(), 7u);
  for (const auto& w : r.witnesses) EXPECT_TRUE(mf::replay_congruence(*f, *g, ell, w));
}

TEST(CongruencePrimes, SyntheticPairs) {
  std::mt19937_64 gen(31);
  ff::Rng rng(1);
  const Json base = support::fixture_json("49a1.json");
  const auto f = support::fixture("49a1.json");
  for (u64 ell : {3ULL, 11ULL, 13ULL}) {
    const auto g = std::make_shared<const mf::Newform>(mf::ingest(support::perturbed_record(base, "g", static_cast<long long>(ell), gen)));
    const mf::Gallery gallery{{f, g}, 49};
    const auto cp = mf::congruence_primes(*f, gallery, mf::primes_in_range(2, 50), rng);
    EXPECT_EQ(cp.primes, std::set<u64>{ell});
  }
  const auto g = std::make_shared<const mf::Newform>(mf::ingest(support::shifted_at_prime(base, "g", 2, 1)));
  const mf::Gallery gallery{{f, g}, 49};
  EXPECT_TRUE(mf::congruence_primes(*f, gallery, {3}, rng).primes.empty());
}
