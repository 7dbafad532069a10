#include "galdef/obstruct.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace galdef::ob {

namespace {

using mf::gcd;
using mf::valuation;

std::vector<u64> coords(const ff::FqElement& x) { return x.rep().coeffs(); }

Integer int_pow(u64 base, unsigned exp) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

/// (p + 1)^2 p^(k - 2) omega(p)
nf::AlgebraicNumber trace_rhs(const Newform& f, u64 p) {
  const Integer c = int_pow(p + 1, 2) * int_pow(p, static_cast<unsigned>(f.weight - 2));
  return nf::AlgebraicNumber::from_integer(f.field, c) * f.character.at_prime(p);
}

std::optional<ff::FqElement> try_reduce(const nf::AlgebraicNumber& a, const PrimeAbove& lambda, std::string& why) {
  try {
    return nf::reduce(a, lambda);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IndeterminateReduction && e.kind() != ErrorKind::DenominatorNotInvertible) throw;
    why = e.what();
    return std::nullopt;
  }
}

u64 witness_prime(const Witness& w) {
  return std::visit(
      [](const auto& x) -> u64 {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DivisibilityWitness> || std::is_same_v<T, ResidueWitness> || std::is_same_v<T, PowerWitness>) {
          return x.p;
        } else {
          return 0;
        }
      },
      w);
}

ResidueWitness trace_witness(const Newform& f, const PrimeAbove& lambda, u64 p) {
  const ff::FqElement lhs = nf::reduce(f.a(p).pow(2), lambda);
  const ff::FqElement rhs = nf::reduce(trace_rhs(f, p), lambda);
  return ResidueWitness{p, "a_p^2", "(p + 1)^2 p^(k - 2) omega(p)", coords(lhs), coords(rhs)};
}

ResidueWitness weight_two_witness(const Newform& f, const PrimeAbove& lambda) {
  const u64 ell = lambda.ell;
  const ff::FqElement lhs = nf::reduce(f.a(ell).pow(2), lambda);
  const ff::FqElement rhs = nf::reduce(f.character.at_prime(ell), lambda);
  return ResidueWitness{ell, "a_ell^2", "omega(ell)", coords(lhs), coords(rhs)};
}

void require_same_field(const Newform& f, const PrimeAbove& lambda) {
  if (!lambda.field || !(*lambda.field == *f.field)) {
    throw Error(ErrorKind::Precondition, "prime above " + std::to_string(lambda.ell) + " does not belong to the field of " + f.label);
  }
}

constexpr const char* kNote =
    "The ten conditions are necessary for an obstruction, not sufficient, and condition (9) is not a sharp criterion. "
    "A verdict of unobstructed-candidate means no condition fired; it is not a proof of unobstructedness.";

}  // namespace

bool witness_holds(const Witness& w) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoundWitness>) {
          return x.ell <= static_cast<u64>(x.weight);
        } else if constexpr (std::is_same_v<T, DivisibilityWitness>) {
          return x.ell != 0 && mpz_divisible_ui_p(x.value.get_mpz_t(), x.ell) != 0;
        } else if constexpr (std::is_same_v<T, ResidueWitness>) {
          return x.lhs == x.rhs;
        } else if constexpr (std::is_same_v<T, OrdinaryWitness>) {
          return x.ell == static_cast<u64>(x.weight) + 1 && !x.a_ell.empty();
        } else if constexpr (std::is_same_v<T, CongruenceHitWitness>) {
          return true;
        } else {
          return x.residue == 1 % x.ell;
        }
      },
      w);
}

// ------------------------------------------------------------------ query

std::vector<u64> ObstructionQuery::primes_S() const {
  std::set<u64> s(extra_primes.begin(), extra_primes.end());
  for (u64 p : mf::prime_divisors(form->level)) s.insert(p);
  s.insert(ell);
  return {s.begin(), s.end()};
}

Integer ObstructionQuery::N_S() const {
  Integer out = 1;
  for (u64 p : primes_S()) out *= static_cast<unsigned long>(p);
  return out;
}

std::vector<ObstructionQuery> make_queries(NewformPtr form, u64 ell, const std::set<u64>& extra_primes) {
  if (!ff::is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime", "ell");
  if (ell <= 3) throw Error(ErrorKind::HypothesisViolated, "ell > 3 is required, got " + std::to_string(ell), "ell");
  if (form->level % ell == 0) {
    throw Error(ErrorKind::HypothesisViolated, std::to_string(ell) + " divides the level " + std::to_string(form->level), "ell");
  }
  for (u64 p : extra_primes) {
    if (!ff::is_prime(p)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(p) + " is not prime", "extra_primes");
  }
  std::vector<ObstructionQuery> out;
  for (auto& lambda : nf::primes_above(form->field, ell)) out.push_back(ObstructionQuery{form, extra_primes, ell, std::move(lambda)});
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::UnobstructedCandidate: return "unobstructed-candidate";
    case Verdict::PossiblyObstructed: return "possibly-obstructed";
    case Verdict::HypothesisViolated: return "hypothesis-violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::UnobstructedCandidate, Verdict::PossiblyObstructed, Verdict::HypothesisViolated, Verdict::Inconclusive}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- battery

namespace {

struct Battery {
  const ObstructionQuery& q;
  const Newform& f;
  const PrimeAbove& lambda;
  std::vector<ConditionCheck> checks;

  ConditionCheck& open(int id) {
    checks.push_back(ConditionCheck{id, false, false, {}, {}});
    return checks.back();
  }

  static void record(ConditionCheck& c, ConditionHit hit) {
    c.holds = c.holds || witness_holds(hit.witness);
    c.evidence.push_back(std::move(hit));
  }

  static void undecided(ConditionCheck& c, const std::string& why) {
    c.inconclusive = true;
    if (!c.note.empty()) c.note += "; ";
    c.note += why;
  }
};

void condition_1(Battery& b) {
  auto& c = b.open(1);
  Battery::record(c, {1, BoundWitness{b.q.ell, b.f.weight}, {}});
}

void condition_2(Battery& b) {
  auto& c = b.open(2);
  Battery::record(c, {2, DivisibilityWitness{b.q.ell, 0, "N", Integer(static_cast<unsigned long>(b.f.level))}, {}});
}

void condition_3(Battery& b) {
  auto& c = b.open(3);
  for (u64 p : b.q.primes_S()) {
    Battery::record(c, {3, DivisibilityWitness{b.q.ell, p, "p - 1", Integer(static_cast<unsigned long>(p - 1))}, {}});
  }
}

void condition_4(Battery& b) {
  auto& c = b.open(4);
  for (u64 p : mf::prime_divisors(b.f.level)) {
    Battery::record(c, {4, DivisibilityWitness{b.q.ell, p, "p + 1", Integer(static_cast<unsigned long>(p + 1))}, {}});
  }
  if (c.evidence.empty()) c.note = "N = 1";
}

void condition_5(Battery& b) {
  auto& c = b.open(5);
  for (u64 p : b.q.primes_S()) {
    if (b.f.level % p == 0 || p == b.q.ell) continue;
    std::string why;
    auto lhs = try_reduce(b.f.a(p).pow(2), b.lambda, why);
    auto rhs = lhs ? try_reduce(trace_rhs(b.f, p), b.lambda, why) : std::nullopt;
    if (!lhs || !rhs) {
      Battery::undecided(c, "p = " + std::to_string(p) + ": " + why);
      continue;
    }
    Battery::record(c, {5, ResidueWitness{p, "a_p^2", "(p + 1)^2 p^(k - 2) omega(p)", coords(*lhs), coords(*rhs)}, {}});
  }
  if (c.evidence.empty() && !c.inconclusive) c.note = "no p in S with p not dividing N ell";
}

void condition_6(Battery& b) {
  auto& c = b.open(6);
  if (b.q.ell != static_cast<u64>(b.f.weight) + 1) {
    c.note = "ell != k + 1";
    return;
  }
  std::string why;
  auto a = try_reduce(b.f.a(b.q.ell), b.lambda, why);
  if (!a) {
    Battery::undecided(c, why);
    return;
  }
  if (a->is_zero()) {
    c.note = "a_ell reduces to 0: not ordinary";
    return;
  }
  Battery::record(c, {6, OrdinaryWitness{b.q.ell, b.f.weight, coords(*a)}, {}});
}

void condition_7(Battery& b) {
  auto& c = b.open(7);
  if (b.f.weight != 2) {
    c.note = "k != 2";
    return;
  }
  std::string why;
  auto lhs = try_reduce(b.f.a(b.q.ell).pow(2), b.lambda, why);
  auto rhs = lhs ? try_reduce(b.f.character.at_prime(b.q.ell), b.lambda, why) : std::nullopt;
  if (!lhs || !rhs) {
    Battery::undecided(c, why);
    return;
  }
  Battery::record(c, {7, ResidueWitness{b.q.ell, "a_ell^2", "omega(ell)", coords(*lhs), coords(*rhs)}, {}});
}

void condition_8(Battery& b) {
  auto& c = b.open(8);
  if (b.f.level != 1) {
    c.note = "N != 1";
    return;
  }
  const Integer k = b.f.weight;
  Battery::record(c, {8, DivisibilityWitness{b.q.ell, 0, "(2k - 3)(2k - 1)", Integer((2 * k - 3) * (2 * k - 1))}, {}});
}

void condition_9(Battery& b, const mf::Gallery& gallery, u64 seed) {
  auto& c = b.open(9);
  std::vector<NewformPtr> members;
  try {
    members = mf::comparison_set(b.f, gallery);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GalleryIncomplete) throw;
    Battery::undecided(c, e.what());
    return;
  }
  ff::Rng rng(seed ^ (b.q.ell * 0x9e3779b97f4a7c15ULL));
  std::vector<std::string> unresolved;
  for (const auto& g : members) {
    mf::CongruenceResult r;
    try {
      r = mf::compare_forms(b.f, *g, b.q.ell, rng);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientPrecision) throw;
      unresolved.push_back(e.what());
      continue;
    }
    for (auto& w : r.witnesses) {
      if (w.lambda_f == b.lambda.index) Battery::record(c, {9, CongruenceHitWitness{std::move(w)}, {}});
    }
    for (const auto& [pair, why] : r.unresolved) {
      if (pair.first == b.lambda.index) unresolved.push_back(g->label + ": " + why);
    }
  }
  if (!c.holds) {
    for (const auto& why : unresolved) Battery::undecided(c, why);
  }
  if (members.empty()) c.note = "no other newform of level dividing N and weight k in the gallery";
}

void condition_10(Battery& b) {
  auto& c = b.open(10);
  for (u64 p : mf::prime_divisors(b.f.level)) {
    if (valuation(b.f.level, p) < 2) continue;
    const Integer p4 = int_pow(p, 4);
    const u64 residue = mpz_fdiv_ui(p4.get_mpz_t(), b.q.ell);
    Battery::record(c, {10, PowerWitness{p, b.q.ell, p4, residue}, {}});
  }
  if (c.evidence.empty()) c.note = "no p with p^2 | N";
}

}  // namespace

ObstructionReport check_conditions(const ObstructionQuery& q, const mf::Gallery& gallery, const CheckOptions& opts) {
  const Newform& f = *q.form;
  require_same_field(f, q.lambda);
  if (q.ell <= 3) throw Error(ErrorKind::HypothesisViolated, "ell > 3 is required", "ell");
  if (f.level % q.ell == 0) throw Error(ErrorKind::HypothesisViolated, "ell divides N", "ell");
  if (f.insufficient_precision) {
    throw Error(ErrorKind::InsufficientPrecision,
                f.label + " stores " + std::to_string(f.precision()) + " coefficients below its Sturm bound " +
                    std::to_string(mf::sturm_bound(f.level, f.weight)),
                "an");
  }

  Battery b{q, f, q.lambda, {}};
  b.checks.reserve(10);
  condition_1(b);
  condition_2(b);
  condition_3(b);
  condition_4(b);
  condition_5(b);
  condition_6(b);
  condition_7(b);
  condition_8(b);
  condition_9(b, gallery, opts.seed);
  condition_10(b);

  ObstructionReport r;
  const auto S = q.primes_S();
  r.query = QuerySummary{f.label,
                         f.level,
                         f.weight,
                         q.ell,
                         q.lambda.index,
                         q.lambda.local_factor.coeffs(),
                         q.lambda.residue_degree(),
                         q.lambda.indeterminate(),
                         {q.extra_primes.begin(), q.extra_primes.end()},
                         S,
                         q.N_S()};
  for (const auto& c : b.checks) {
    for (const auto& e : c.evidence) {
      if (witness_holds(e.witness)) r.hits.push_back(e);
    }
    if (c.inconclusive && !c.holds) r.inconclusive.push_back(Inconclusive{c.id, c.note});
  }
  std::stable_sort(r.hits.begin(), r.hits.end(), [](const ConditionHit& a, const ConditionHit& b) {
    return std::pair(a.id, witness_prime(a.witness)) < std::pair(b.id, witness_prime(b.witness));
  });
  r.checks = std::move(b.checks);
  r.hypotheses = Hypotheses{q.ell > 3, opts.assume_irreducible,
                            f.field->irreducibility() == nf::IrreducibilityEvidence::Proven ? "proven" : "asserted"};
  if (!r.hypotheses.ell_gt_3 || !r.hypotheses.absolutely_irreducible_asserted) {
    r.verdict = Verdict::HypothesisViolated;
  } else if (!r.hits.empty()) {
    r.verdict = Verdict::PossiblyObstructed;
  } else if (!r.inconclusive.empty()) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = Verdict::UnobstructedCandidate;
  }
  r.note = kNote;
  return r;
}

// ----------------------------------------------------------------- replay

namespace {

bool replay_divisibility(int id, const DivisibilityWitness& w, const Newform& f, const ConditionHit& hit) {
  Integer expected;
  if (w.expression == "N") {
    if (id != 2) return false;
    expected = static_cast<unsigned long>(f.level);
  } else if (w.expression == "p - 1") {
    if (id != 3 || !ff::is_prime(w.p)) return false;
    expected = static_cast<unsigned long>(w.p - 1);
  } else if (w.expression == "p + 1") {
    if (id != 4 || !ff::is_prime(w.p) || f.level % w.p != 0) return false;
    if (hit.against_optimal_level) {
      if (valuation(f.level, w.p) != 1) return false;
      if (mf::character_reduction_conductor(f.character, w.ell) % w.p == 0) return false;
    }
    expected = static_cast<unsigned long>(w.p + 1);
  } else if (w.expression == "(2k - 3)(2k - 1)") {
    if (id != 8 || f.level != 1) return false;
    const Integer k = f.weight;
    expected = (2 * k - 3) * (2 * k - 1);
  } else {
    return false;
  }
  return expected == w.value && mpz_divisible_ui_p(expected.get_mpz_t(), w.ell) != 0;
}

}  // namespace

bool replay(const ConditionHit& hit, const Newform& f, const PrimeAbove& lambda, const mf::Gallery* gallery) {
  if (!lambda.field || !(*lambda.field == *f.field)) return false;
  const u64 ell = lambda.ell;
  try {
    return std::visit(
        [&](const auto& w) -> bool {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, BoundWitness>) {
            return hit.id == 1 && w.ell == ell && w.weight == f.weight && ell <= static_cast<u64>(f.weight);
          } else if constexpr (std::is_same_v<T, DivisibilityWitness>) {
            return w.ell == ell && replay_divisibility(hit.id, w, f, hit);
          } else if constexpr (std::is_same_v<T, ResidueWitness>) {
            ResidueWitness fresh;
            if (hit.id == 5) {
              if (w.p == ell || f.level % w.p == 0) return false;
              fresh = trace_witness(f, lambda, w.p);
            } else if (hit.id == 7) {
              if (w.p != ell || f.weight != 2) return false;
              fresh = weight_two_witness(f, lambda);
            } else {
              return false;
            }
            return fresh == w && fresh.lhs == fresh.rhs;
          } else if constexpr (std::is_same_v<T, OrdinaryWitness>) {
            if (hit.id != 6 || w.ell != ell || ell != static_cast<u64>(f.weight) + 1) return false;
            const ff::FqElement a = nf::reduce(f.a(ell), lambda);
            return !a.is_zero() && coords(a) == w.a_ell;
          } else if constexpr (std::is_same_v<T, CongruenceHitWitness>) {
            if (hit.id != 9 || !gallery || w.congruence.lambda_f != lambda.index) return false;
            for (const auto& g : gallery->forms) {
              if (g->label == w.congruence.other_label) return mf::replay_congruence(f, *g, ell, w.congruence);
            }
            return false;
          } else {
            if (hit.id != 10 || w.ell != ell || valuation(f.level, w.p) < 2) return false;
            const Integer p4 = int_pow(w.p, 4);
            return p4 == w.p4 && mpz_fdiv_ui(p4.get_mpz_t(), ell) == w.residue && w.residue == 1 % ell;
          }
        },
        hit.witness);
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------------------- scan

std::map<u64, ScanEntry> scan_unobstructed(const NewformPtr& form, const mf::Gallery& gallery, const std::set<u64>& extra_primes,
                                           u64 ell_max, const CheckOptions& opts) {
  std::vector<u64> ells;
  for (u64 ell : mf::primes_in_range(5, ell_max)) {
    if (form->level % ell != 0) ells.push_back(ell);
  }
  std::vector<ScanEntry> results(ells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ells.size(); i = next++) {
      try {
        for (const auto& q : make_queries(form, ells[i], extra_primes)) results[i].reports.push_back(check_conditions(q, gallery, opts));
      } catch (const std::exception& e) {
        results[i].reports.clear();
        results[i].error = e.what();
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(ells.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::map<u64, ScanEntry> out;
  for (std::size_t i = 0; i < ells.size(); ++i) out.emplace(ells[i], std::move(results[i]));
  return out;
}

// -------------------------------------------------------- admissible levels

std::string_view to_string(CaseTag t) {
  switch (t) {
    case CaseTag::One: return "1";
    case CaseTag::TwoA: return "2a";
    case CaseTag::TwoB: return "2b";
    case CaseTag::ThreeA: return "3a";
    case CaseTag::ThreeB: return "3b";
  }
  return "?";
}

std::optional<CaseTag> case_from_string(std::string_view s) {
  for (CaseTag t : {CaseTag::One, CaseTag::TwoA, CaseTag::TwoB, CaseTag::ThreeA, CaseTag::ThreeB}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxLevels = 1'000'000;

std::vector<std::string> three_b_branches(u64 level, u64 p, u64 det_conductor) {
  std::vector<std::string> out;
  if (valuation(level, p) < 2) out.emplace_back("p^2 does not divide N");
  if (valuation(level, p) == valuation(det_conductor, p)) out.emplace_back("v_p(N) = v_p(cond det)");
  return out;
}

void enumerate(const std::vector<std::vector<Supplementary>>& options, std::size_t from, unsigned budget, unsigned __int128 level,
               std::vector<Supplementary>& chosen, std::vector<AdmissibleLevel>& out) {
  for (std::size_t i = from; i < options.size() && budget > 0; ++i) {
    for (const auto& s : options[i]) {
      unsigned __int128 next = level;
      for (unsigned a = 0; a < s.alpha; ++a) next *= s.p;
      if (next > UINT64_MAX) throw Error(ErrorKind::Precondition, "admissible level exceeds 64 bits", "alpha_budget");
      chosen.push_back(s);
      out.push_back(AdmissibleLevel{static_cast<u64>(next), chosen});
      if (out.size() > kMaxLevels) throw Error(ErrorKind::Precondition, "more than 10^6 admissible levels", "alpha_budget");
      enumerate(options, i + 1, budget - 1, next, chosen, out);
      chosen.pop_back();
    }
  }
}

}  // namespace

AdmissibleLevels admissible_levels(const Newform& f, const PrimeAbove& lambda, u64 p_max, unsigned alpha_budget) {
  require_same_field(f, lambda);
  const u64 ell = lambda.ell;
  if (f.level % ell == 0) throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the level", "ell");
  if (p_max > f.precision()) {
    throw Error(ErrorKind::InsufficientPrecision,
                "p_max " + std::to_string(p_max) + " exceeds the stored precision " + std::to_string(f.precision()), "p_max");
  }
  const u64 det_conductor = mf::character_reduction_conductor(f.character, ell);
  const u64 N = f.level;

  AdmissibleLevels out;
  std::vector<std::vector<Supplementary>> options;
  for (u64 p : mf::primes_in_range(2, p_max)) {
    if (p == ell) continue;
    const unsigned v = valuation(N, p);
    const bool minus = (p + 1) % ell == 0;
    const bool plus = (p - 1) % ell == 0;
    std::vector<Supplementary> opts;

    if (v == 0) {
      std::string why;
      const nf::AlgebraicNumber& ap = f.a(p);
      const nf::AlgebraicNumber lhs = nf::AlgebraicNumber::from_integer(f.field, static_cast<unsigned long>(p)) * ap.pow(2);
      const nf::AlgebraicNumber rhs = nf::AlgebraicNumber::from_integer(f.field, int_pow(p + 1, 2) * int_pow(p, static_cast<unsigned>(f.weight - 1))) *
                                      f.character.at_prime(p);
      auto l = try_reduce(lhs, lambda, why);
      auto r = l ? try_reduce(rhs, lambda, why) : std::nullopt;
      auto a = r ? try_reduce(ap, lambda, why) : std::nullopt;
      if (!a) {
        out.excluded.push_back(Exclusion{p, "cases 1 and 2a undecidable: " + why});
      } else {
        if (*l == *r) opts.push_back(Supplementary{p, 1, CaseTag::One, {"p tr^2 = (1 + p)^2 det"}});
        if (minus && a->is_zero()) opts.push_back(Supplementary{p, 2, CaseTag::TwoA, {"p does not divide N", "tr = 0"}});
      }
    }
    if (minus && v == 1 && det_conductor % p != 0) {
      opts.push_back(Supplementary{p, 1, CaseTag::TwoB, {"p || N", "det unramified at p"}});
    }
    if (plus && v == 0) opts.push_back(Supplementary{p, 2, CaseTag::ThreeA, {"p does not divide N"}});
    if (plus) {
      auto branches = three_b_branches(N, p, det_conductor);
      if (!branches.empty()) opts.push_back(Supplementary{p, 1, CaseTag::ThreeB, std::move(branches)});
    }
    if (opts.empty()) continue;
    out.tagged.insert(out.tagged.end(), opts.begin(), opts.end());
    options.push_back(std::move(opts));
  }

  out.levels.push_back(AdmissibleLevel{N, {}});
  std::vector<Supplementary> chosen;
  enumerate(options, 0, alpha_budget, N, chosen, out.levels);
  return out;
}

// -------------------------------------------------------------- witnesses

ConditionHit witness_obstruction(const Newform& f, const PrimeAbove& lambda, u64 p, CaseTag tag) {
  require_same_field(f, lambda);
  const u64 ell = lambda.ell;
  const std::string where = "p = " + std::to_string(p) + ", case " + std::string(to_string(tag));
  auto mismatch = [&](const std::string& why) { return Error(ErrorKind::CaseMismatch, where + ": " + why, "tag"); };
  if (!ff::is_prime(p) || p == ell) throw mismatch("p must be a prime other than ell");
  if (f.level % ell == 0) throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the level", "ell");
  const unsigned v = valuation(f.level, p);
  const bool minus = (p + 1) % ell == 0;
  const bool plus = (p - 1) % ell == 0;
  const Integer pm1 = static_cast<unsigned long>(p - 1);
  const Integer pp1 = static_cast<unsigned long>(p + 1);

  switch (tag) {
    case CaseTag::ThreeA:
      if (!plus) throw mismatch("p is not 1 mod ell");
      if (v != 0) throw mismatch("p divides N");
      return ConditionHit{3, DivisibilityWitness{ell, p, "p - 1", pm1}, "phi_divisibility"};
    case CaseTag::ThreeB:
      if (!plus) throw mismatch("p is not 1 mod ell");
      if (three_b_branches(f.level, p, mf::character_reduction_conductor(f.character, ell)).empty()) {
        throw mismatch("neither branch of the case holds");
      }
      return ConditionHit{3, DivisibilityWitness{ell, p, "p - 1", pm1}, "phi_divisibility"};
    case CaseTag::One: {
      if (v != 0) throw mismatch("p divides N");
      ResidueWitness w = trace_witness(f, lambda, p);
      if (w.lhs != w.rhs) throw mismatch("a_p^2 is not (p + 1)^2 p^(k - 2) omega(p) mod lambda");
      return ConditionHit{5, std::move(w), "trace_congruence"};
    }
    case CaseTag::TwoA: {
      if (!minus) throw mismatch("p is not -1 mod ell");
      if (v != 0) throw mismatch("p divides N");
      if (!nf::reduce(f.a(p), lambda).is_zero()) throw mismatch("a_p is nonzero mod lambda");
      ResidueWitness w = trace_witness(f, lambda, p);
      if (w.lhs != w.rhs) throw mismatch("a_p^2 is not (p + 1)^2 p^(k - 2) omega(p) mod lambda");
      return ConditionHit{5, std::move(w), "trace_congruence"};
    }
    case CaseTag::TwoB:
      if (!minus) throw mismatch("p is not -1 mod ell");
      if (v != 1) throw mismatch("p does not exactly divide N");
      if (mf::character_reduction_conductor(f.character, ell) % p == 0) throw mismatch("det is ramified at p");
      return ConditionHit{4, DivisibilityWitness{ell, p, "p + 1", pp1}, "special_prime", true};
  }
  throw mismatch("unknown case");
}

H2Bound h2_lower_bound(const Newform& f, const AdmissibleLevel& level, const PrimeAbove& lambda) {
  unsigned __int128 expected = f.level;
  std::set<u64> seen;
  for (const auto& s : level.supplementary) {
    if (!seen.insert(s.p).second) throw Error(ErrorKind::Precondition, "supplementary prime listed twice", "level");
    for (unsigned a = 0; a < s.alpha; ++a) expected *= s.p;
  }
  if (expected != level.level) {
    throw Error(ErrorKind::Precondition, "level " + std::to_string(level.level) + " is not N times the supplementary factors", "level");
  }
  H2Bound out{static_cast<unsigned>(level.supplementary.size()), {}};
  for (const auto& s : level.supplementary) out.witnesses.push_back(witness_obstruction(f, lambda, s.p, s.tag));
  return out;
}

}  // namespace galdef::ob
