#pragma once

// Brute-force baselines for tiny parameters, and seeded random flag generators.
// Nothing here calls the linear-algebra solvers except gen_random_flag, which uses
// them only to sample; verdicts come from plain enumeration.

#include <chrono>
#include <functional>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "surflift/flags.hpp"
#include "surflift/surface.hpp"

namespace surflift::oracle {

struct SearchBudget {
  std::uint64_t max_count = std::uint64_t{1} << 20;
  std::chrono::milliseconds time_ceiling{std::chrono::minutes(5)};
  /// Default budget, with max_count overridden by SURFLIFT_ORACLE_BUDGET if set.
  static SearchBudget from_env();
};

/// Calls visit(v) for every v ∈ (Z/p^s)^n; throws BudgetExceeded if p^{s n} > max_count.
void enumerate_vectors(const Ring& ring, int n, const SearchBudget& budget,
                       const std::function<void(const Vec&)>& visit);

struct BruteH1 {
  std::uint64_t cocycles = 0;
  std::uint64_t coboundaries = 0;
  std::uint64_t invariants = 0;      // |H^0|
  std::vector<int> exponents;        // invariant factors of H^1, nondecreasing
  std::uint64_t order() const { return cocycles / coboundaries; }
};
BruteH1 brute_h1(const GModule& m, const SearchBudget& budget = SearchBudget::from_env());

/// Every lift of f (mod p^r) to mod p^{r+1} with least-residue diagonal.
std::vector<Flag> brute_lift(const Flag& f, const SearchBudget& budget = SearchBudget::from_env());
/// Every gluing of e and f (same conventions as glue()).
std::vector<Flag> brute_glue(const Flag& e, const Flag& f, const SearchBudget& budget = SearchBudget::from_env());

/// Is every 1-cocycle of m mod p congruent, modulo coboundaries, to the reduction of
/// a 1-cocycle of m? Returns (|image|, |Z^1(m mod p)|) with image closed under B^1.
std::pair<std::uint64_t, std::uint64_t> brute_h1_reduction_image(const GModule& m,
                                                                 const SearchBudget& budget = SearchBudget::from_env());

enum class FlagKind { Any, Kummer, WoundKummer };
FlagKind parse_flag_kind(const std::string& s);
std::string to_string(FlagKind k);

struct FlagRequest {
  Residue p = 2;
  int r = 1;
  int dim = 2;
  int genus = 1;
  FlagKind kind = FlagKind::Any;
  std::uint64_t seed = 0;
  int max_attempts = 20000;
};

/// Rejection sampler: 2g-1 triangular generators are drawn freely and the last one
/// from the solution space of the (linear) relator equation; resampled until the
/// requested predicate holds. Deterministic per seed.
Flag gen_random_flag(const FlagRequest& req);

}  // namespace surflift::oracle
