#pragma once

// The ten-condition obstruction battery, admissible non-optimal levels,
// obstruction witnesses for supplementary primes and the H^2 lower bound.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "galdef/errors.hpp"
#include "galdef/modform.hpp"

namespace galdef::ob {

using ff::u64;
using mf::Newform;
using mf::NewformPtr;
using nf::Integer;
using nf::PrimeAbove;

/// (1): ell <= k.
struct BoundWitness {
  u64 ell;
  int weight;
  friend bool operator==(const BoundWitness&, const BoundWitness&) = default;
};

/// ell | value, where value is `expression` evaluated at p (or at N, k).
/// Expressions: "N", "p - 1", "p + 1", "(2k - 3)(2k - 1)".
struct DivisibilityWitness {
  u64 ell;
  u64 p;  // 0 when the expression does not involve a prime
  std::string expression;
  Integer value;
  friend bool operator==(const DivisibilityWitness&, const DivisibilityWitness&) = default;
};

/// reduce(lhs) compared with reduce(rhs) in the residue field at lambda,
/// both given as coefficient vectors in that field.
struct ResidueWitness {
  u64 p;
  std::string lhs_expression;
  std::string rhs_expression;
  std::vector<u64> lhs;
  std::vector<u64> rhs;
  friend bool operator==(const ResidueWitness&, const ResidueWitness&) = default;
};

/// (6): ell = k + 1 and reduce(a_ell) is a unit.
struct OrdinaryWitness {
  u64 ell;
  int weight;
  std::vector<u64> a_ell;
  friend bool operator==(const OrdinaryWitness&, const OrdinaryWitness&) = default;
};

/// (9): a congruence with another member of the gallery.
struct CongruenceHitWitness {
  mf::CongruenceWitness congruence;
  friend bool operator==(const CongruenceHitWitness&, const CongruenceHitWitness&) = default;
};

/// (10): p^4 mod ell for p with p^2 | N.
struct PowerWitness {
  u64 p;
  u64 ell;
  Integer p4;
  u64 residue;
  friend bool operator==(const PowerWitness&, const PowerWitness&) = default;
};

using Witness = std::variant<BoundWitness, DivisibilityWitness, ResidueWitness, OrdinaryWitness, CongruenceHitWitness, PowerWitness>;

/// Whether the recorded numbers realize the condition (no recomputation).
bool witness_holds(const Witness& w);

/// A disjunct of the battery, with the numbers that decide it. Also used for
/// evaluated-but-false instances inside a ConditionCheck.
struct ConditionHit {
  int id;
  Witness witness;
  std::string mechanism;               // empty for battery hits
  bool against_optimal_level = false;  // raised on D(f) itself rather than D(f, S')
  friend bool operator==(const ConditionHit&, const ConditionHit&) = default;
};

struct ConditionCheck {
  int id;
  bool holds;
  bool inconclusive;
  std::vector<ConditionHit> evidence;  // every instance examined, fired or not
  std::string note;
  friend bool operator==(const ConditionCheck&, const ConditionCheck&) = default;
};

struct ObstructionQuery {
  NewformPtr form;
  std::set<u64> extra_primes;
  u64 ell;
  PrimeAbove lambda;

  /// {p | N} union extra primes union {ell}, ascending.
  std::vector<u64> primes_S() const;
  /// Product of the primes in S.
  Integer N_S() const;
};

/// One query per prime above ell. Throws HypothesisViolated when ell <= 3 or
/// ell | N, NonPrimeModulus when ell or an extra prime is not prime.
std::vector<ObstructionQuery> make_queries(NewformPtr form, u64 ell, const std::set<u64>& extra_primes);

/// Plain-data image of a query for reports.
struct QuerySummary {
  std::string label;
  u64 level;
  int weight;
  u64 ell;
  std::size_t lambda_index;
  std::vector<u64> lambda_factor;
  int residue_degree;
  bool lambda_indeterminate;
  std::vector<u64> extra_primes;
  std::vector<u64> S;
  Integer N_S;
  friend bool operator==(const QuerySummary&, const QuerySummary&) = default;
};

struct Hypotheses {
  bool ell_gt_3;
  bool absolutely_irreducible_asserted;
  std::string field_irreducibility;  // "proven" or "asserted"
  friend bool operator==(const Hypotheses&, const Hypotheses&) = default;
};

enum class Verdict { UnobstructedCandidate, PossiblyObstructed, HypothesisViolated, Inconclusive };

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

struct Inconclusive {
  int id;
  std::string reason;
  friend bool operator==(const Inconclusive&, const Inconclusive&) = default;
};

struct ObstructionReport {
  QuerySummary query;
  std::vector<ConditionHit> hits;  // sorted by condition id, then p
  std::vector<Inconclusive> inconclusive;
  std::vector<ConditionCheck> checks;  // one per condition, ids 1..10
  Hypotheses hypotheses;
  Verdict verdict;
  std::string note;
  friend bool operator==(const ObstructionReport&, const ObstructionReport&) = default;
};

struct CheckOptions {
  bool assume_irreducible = true;
  u64 seed = ff::kDefaultSeed;
};

/// Evaluate all ten disjuncts. Throws InsufficientPrecision when f is too
/// short for its own Sturm bound or for a_p at some p in S.
ObstructionReport check_conditions(const ObstructionQuery& q, const mf::Gallery& gallery, const CheckOptions& opts = {});

/// Recompute a hit from the form, lambda and gallery and confirm it holds.
bool replay(const ConditionHit& hit, const Newform& f, const PrimeAbove& lambda, const mf::Gallery* gallery = nullptr);

struct ScanEntry {
  std::vector<ObstructionReport> reports;  // ordered by lambda index
  std::optional<std::string> error;
};

/// Every prime 3 < ell <= ell_max with ell not dividing N, checked
/// independently; errors are recorded per ell.
std::map<u64, ScanEntry> scan_unobstructed(const NewformPtr& form, const mf::Gallery& gallery, const std::set<u64>& extra_primes,
                                           u64 ell_max, const CheckOptions& opts = {});

enum class CaseTag { One, TwoA, TwoB, ThreeA, ThreeB };

std::string_view to_string(CaseTag t);
std::optional<CaseTag> case_from_string(std::string_view s);

struct Supplementary {
  u64 p;
  unsigned alpha;
  CaseTag tag;
  std::vector<std::string> branches;  // which side conditions of the tag held
  friend bool operator==(const Supplementary&, const Supplementary&) = default;
};

struct AdmissibleLevel {
  u64 level;
  std::vector<Supplementary> supplementary;  // ascending p
  friend bool operator==(const AdmissibleLevel&, const AdmissibleLevel&) = default;
};

struct Exclusion {
  u64 p;
  std::string reason;
};

struct AdmissibleLevels {
  std::vector<Supplementary> tagged;  // every admissible (p, alpha, tag), ascending p
  std::vector<AdmissibleLevel> levels;  // N' = N first
  std::vector<Exclusion> excluded;
};

/// Tag supplementary primes p <= p_max and combine up to alpha_budget of
/// them (one tag per prime) into levels.
AdmissibleLevels admissible_levels(const Newform& f, const PrimeAbove& lambda, u64 p_max, unsigned alpha_budget);

/// The obstruction a supplementary prime forces. Throws CaseMismatch when the
/// tag's side conditions fail.
ConditionHit witness_obstruction(const Newform& f, const PrimeAbove& lambda, u64 p, CaseTag tag);

struct H2Bound {
  unsigned bound;
  std::vector<ConditionHit> witnesses;  // one per prime dividing N'/N
};

/// Number of distinct primes dividing N'/N. Throws Precondition when the
/// level does not factor as recorded.
H2Bound h2_lower_bound(const Newform& f, const AdmissibleLevel& level, const PrimeAbove& lambda);

}  // namespace galdef::ob
