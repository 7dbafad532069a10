#pragma once

// Newform records, galleries of Galois orbits, Sturm bounds and congruence
// detection between eigenvalue systems modulo primes above ell.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "galdef/ffkernel.hpp"
#include "galdef/json_types.hpp"
#include "galdef/numfield.hpp"

namespace galdef::mf {

using ff::u64;
using nf::AlgebraicNumber;
using nf::FieldPtr;
using nf::PrimeAbove;

struct LocalComponent {
  u64 q;
  unsigned e;
  u64 order;

  friend bool operator==(const LocalComponent&, const LocalComponent&) = default;
};

/// A Dirichlet character known through its local component orders and its
/// values at primes. It is never evaluated at composite arguments.
class DirichletCharacter {
 public:
  DirichletCharacter(u64 modulus, u64 conductor, std::vector<LocalComponent> components,
                     std::map<u64, AlgebraicNumber> values, FieldPtr field);

  static DirichletCharacter trivial(FieldPtr field);

  u64 modulus() const noexcept { return modulus_; }
  u64 conductor() const noexcept { return conductor_; }
  const std::vector<LocalComponent>& components() const noexcept { return components_; }
  const std::map<u64, AlgebraicNumber>& values() const noexcept { return values_; }
  /// lcm of the component orders.
  u64 order() const noexcept { return order_; }
  bool is_trivial() const noexcept { return conductor_ == 1; }

  /// omega(p) for a prime p. Zero when p divides the modulus; throws
  /// InsufficientPrecision when the value was not stored.
  AlgebraicNumber at_prime(u64 p) const;

 private:
  u64 modulus_;
  u64 conductor_;
  std::vector<LocalComponent> components_;
  std::map<u64, AlgebraicNumber> values_;
  FieldPtr field_;
  u64 order_;
};

struct Newform {
  std::string label;
  u64 level;
  int weight;
  DirichletCharacter character;
  FieldPtr field;
  std::vector<AlgebraicNumber> eigenvalues;  // a_1 .. a_B, index n - 1
  bool insufficient_precision = false;
  std::optional<u64> complete_gallery_for;

  u64 precision() const noexcept { return eigenvalues.size(); }
  /// a_n; throws InsufficientPrecision beyond the stored bound.
  const AlgebraicNumber& a(u64 n) const;
};

using NewformPtr = std::shared_ptr<const Newform>;

/// A set of Galois orbits, optionally declared complete for a level.
struct Gallery {
  std::vector<NewformPtr> forms;
  std::optional<u64> complete_for_level;
};

/// Validate and build a newform from its JSON record. Throws Schema or
/// InvariantViolation with the offending field path.
Newform ingest(const Json& record);
Newform load_newform(const std::filesystem::path& path);

/// Accepts {"complete_for_level": N | null, "forms": [...]} or a bare array
/// of records (completeness then comes from their complete_gallery_for).
Gallery gallery_from_json(const Json& doc);
Gallery load_gallery(const std::filesystem::path& path);

/// Index of Gamma_1(N) modulo +-1.
u64 gamma1_index(u64 level);
/// ceil(k * index / 12).
u64 sturm_bound(u64 level, int weight);

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
std::vector<u64> prime_divisors(u64 n);
unsigned valuation(u64 n, u64 p);
std::vector<u64> primes_in_range(u64 lo, u64 hi);

struct LambdaReduction {
  PrimeAbove prime;
  /// Reduction of a_n at index n - 1; nullopt where it is indeterminate.
  std::vector<std::optional<ff::FqElement>> values;
  std::string indeterminate_reason;  // empty when every value reduced
};

/// One entry per prime above ell, covering a_1 .. a_bound. Throws
/// Precondition when ell | N and InsufficientPrecision when bound exceeds the
/// stored precision.
std::vector<LambdaReduction> reductions(const Newform& f, u64 ell, u64 bound);
/// bound = sturm_bound(N, k).
std::vector<LambdaReduction> reductions(const Newform& f, u64 ell);

enum class EmbeddingDirection {
  GIntoF,          // residue field of g embeds into that of f
  FIntoG,          // residue field of f embeds into that of g
  CommonExtension, // neither degree divides the other
};

std::string_view to_string(EmbeddingDirection d);

/// One matching of reductions: lambda_f, lambda_g, and the embedding.
struct CongruenceWitness {
  std::string other_label;
  std::size_t lambda_f;
  std::size_t lambda_g;
  EmbeddingDirection direction;
  std::vector<u64> target_field;  // defining polynomial of the field compared in
  std::vector<u64> source_root;   // image of the embedded field's generator
  std::vector<u64> f_root;        // CommonExtension only: image of f's generator
  unsigned frobenius_power;       // source_root = Frob^power(first root)
  u64 bound;
  u64 indices_compared;

  friend bool operator==(const CongruenceWitness&, const CongruenceWitness&) = default;
};

struct CongruenceResult {
  std::vector<CongruenceWitness> witnesses;
  /// (lambda_f, lambda_g) pairs that could not be compared, with a reason.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::string>> unresolved;
};

/// Compare all (lambda_f, lambda_g, embedding) combinations at indices
/// n <= bound coprime to ell * N * N'. Throws Precondition when ell divides
/// either level and InsufficientPrecision when either form is too short.
CongruenceResult compare_forms(const Newform& f, const Newform& g, u64 ell, ff::Rng& rng);

/// Witness list of compare_forms; throws IndeterminateReduction when it is
/// empty and some pair was unresolved.
std::vector<CongruenceWitness> congruent_mod(const Newform& f, const Newform& g, u64 ell, ff::Rng& rng);

/// Recompute a witness from scratch.
bool replay_congruence(const Newform& f, const Newform& g, u64 ell, const CongruenceWitness& w);

/// Comparison bound for a pair: sturm_bound(lcm of levels, max weight).
u64 congruence_bound(const Newform& f, const Newform& g);

/// Members of the gallery that can witness a congruence prime for f: level
/// dividing N, weight k, and a label other than f's. Throws GalleryIncomplete
/// unless the gallery is declared complete for a multiple of N.
std::vector<NewformPtr> comparison_set(const Newform& f, const Gallery& gallery);

struct CongruencePrimes {
  std::set<u64> primes;
  std::set<u64> unresolved;
};

/// Primes ell in `ells` (ell not dividing N) for which some comparison member
/// is congruent to f.
CongruencePrimes congruence_primes(const Newform& f, const Gallery& gallery, const std::vector<u64>& ells, ff::Rng& rng);

/// Conductor of the reduction of omega mod ell: product of q^e over local
/// components whose order is not a power of ell. Throws Precondition if
/// ell divides the modulus.
u64 character_reduction_conductor(const DirichletCharacter& omega, u64 ell);

}  // namespace galdef::mf
