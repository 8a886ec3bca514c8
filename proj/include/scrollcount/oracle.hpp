#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scrollcount/budget.hpp"
#include "scrollcount/dimensions.hpp"
#include "scrollcount/partitions.hpp"

namespace scrollcount {

// Genus-zero Gromov-Witten invariants of Grassmannians. Degree-one
// invariants are classical: a degree-one curve is a line respectively a
// pencil of lines, and the invariant is an intersection number on its
// parameter space. Higher degrees are derived by closing the system of WDVV
// associativity relations degree by degree with exact rational elimination.
// Values that the relations (or the budget) fail to pin down are reported as
// undetermined, never guessed.

enum class Provenance {
  Anchor,    // geometric seed value
  Derived,   // solved from WDVV relations
  Imported,  // merged from an external store
};

std::string to_string(Provenance p);

struct InvariantKey {
  GrassmannianId space;
  int degree = 0;
  std::vector<Partition> classes; // canonical: sorted, every weight >= 2

  // Sorts the classes into canonical order and validates box membership and
  // weights. Throws InvalidConditionError on malformed input.
  static InvariantKey make(const GrassmannianId& space, int degree,
                           std::vector<Partition> classes);

  auto operator<=>(const InvariantKey&) const = default;
  std::string to_string() const;
};

struct StoredInvariant {
  mpz_class value;
  Provenance provenance = Provenance::Derived;
};

struct TranslatedProblem {
  GrassmannianId space;
  int degree = 0;
  std::vector<Partition> classes;
};

// The incidence conditions of a scroll problem as insertions on the
// Grassmannian of lines: a dimension-a condition becomes σ_{N−1−a}, and the
// section curves have degree k+l.
TranslatedProblem translate_conditions(const IncidenceProblem& problem);

// Degree-zero invariant: the classical triple intersection number for three
// insertions of total weight dim G, zero in every other case.
mpz_class classical_invariant(const GrassmannianId& space,
                              const std::vector<Partition>& classes);

class GwOracle {
 public:
  // I_d(classes) on the given Grassmannian. Insertions may arrive in any
  // order and may include fundamental or divisor classes; the fundamental,
  // divisor and grading axioms are applied before lookup. Unknown values
  // trigger the WDVV solver, capped by the budget.
  mpz_class invariant(const GrassmannianId& space, int degree,
                      const std::vector<Partition>& classes,
                      const Budget& budget = Budget());

  // Characteristic number of balanced scrolls meeting general linear spaces:
  // the translated invariant, halved in degree 2 because a quadric surface
  // carries two rulings and is counted once per ruling.
  mpz_class scroll_count(const IncidenceProblem& problem,
                         const Budget& budget = Budget());

  // Re-checks stored values against independently generated WDVV instances
  // with every insertion count up to max_insertions. Returns the number of
  // instances checked; throws AuditError on any violation.
  std::size_t audit(const GrassmannianId& space, int max_degree,
                    int max_insertions, const Budget& budget = Budget());

  const std::map<InvariantKey, StoredInvariant>& entries() const {
    return store_;
  }

  // Merges an externally stored value. Any disagreement with an existing
  // entry, or a key whose grading cannot carry a nonzero invariant, is a
  // fatal integrity failure.
  void import_entry(const InvariantKey& key, const mpz_class& value);

 private:
  friend class WdvvSolver;

  // Stores every invariant of the given degree up to the insertion cap that
  // has a closed form on a classical parameter space: lines respectively
  // pencils in degree one, rulings of quadric surfaces in degree two.
  void solve_closed_forms(const GrassmannianId& space, int degree,
                          int max_insertions, const Budget& budget);
  void ensure_solved(const GrassmannianId& space, int degree, int max_insertions,
                     const Budget& budget);

  std::map<InvariantKey, StoredInvariant> store_;
  std::map<InvariantKey, char> undetermined_;
  // Highest insertion count already solved, per (space, degree).
  std::map<std::pair<GrassmannianId, int>, int> solved_caps_;
};

} // namespace scrollcount
