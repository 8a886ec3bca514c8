#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "scrollcount/dimensions.hpp"
#include "scrollcount/errors.hpp"

namespace scrollcount {

// Exact counting of rational normal scrolls by hyperplane degeneration.
//
// The recursion specializes the incidence conditions of a problem into a
// general hyperplane H one at a time (and, one level deeper, specializes
// curve conditions into a plane Π), enumerates the finitely many limit
// configurations that can absorb each specialization, and sums exact
// contributions over those branches. Every multiplicity in the recursion is 1;
// all numeric factors are either combinatorial (how conditions distribute over
// a broken configuration) or incidence degrees (a condition that becomes
// vacuous in the limit is traded for the degree of the subvariety it met).
//
// The engine only answers when it can certify a specialization order for the
// whole recursion tree: one point condition is always held outside H so that
// no branch degenerates through a configuration the branch catalog does not
// cover, and every base case it reaches is either computed from first
// principles here (Schubert calculus on an auxiliary parameter space) or is a
// cataloged count cross-validated against the independent Gromov–Witten
// oracle. Anything else throws ScopeError (or its subclass BaseCaseGapError
// when the recursion itself is fine but a base count is not cataloged); it
// never guesses.

// ---------------------------------------------------------------------------
// Problem state
// ---------------------------------------------------------------------------

// What an incidence condition constrains once the recursion has started: the
// surface itself, or the marked hyperplane-section curve that records the
// degeneration history.
enum class ConditionTarget { Surface, MarkedCurve };

// Where a condition currently lives. Free conditions are in general position
// in the ambient space; InH conditions have been specialized into the
// hyperplane H; InPi conditions have been further specialized into the plane
// Π spanned by the directrix data.
enum class ConditionStage { Free, InH, InPi };

struct Condition {
    int dim = 0; // dimension of the general linear space the condition meets
    ConditionTarget target = ConditionTarget::Surface;
    ConditionStage stage = ConditionStage::Free;

    auto operator<=>(const Condition&) const = default;
};

// A constraint on a marked fiber (ruling line) of the scroll, written as a
// (contain, meet) pair: the fiber lies inside a fixed linear space of
// dimension contain_dim and meets a general linear space of dimension
// meet_dim. meet_dim = -1 means no meet constraint. A problem may carry
// several FiberCondition records; they all constrain the same single marked
// fiber (the junction line along which a broken configuration is glued).
struct FiberCondition {
    int contain_dim = 0;
    int meet_dim = -1;

    auto operator<=>(const FiberCondition&) const = default;
};

// A node of the recursion: a scroll specification together with the multiset
// of remaining conditions, optional marked-fiber constraints, the degree of
// the marked section curve if one has been cut out (k+l for the hyperplane
// section, k+l+1 for the section marked on an inside component of a break),
// and the number of general points the marked curve already passes through.
struct ScrollProblem {
    ScrollSpec spec;
    std::vector<Condition> conditions;       // kept sorted by canonicalize()
    std::vector<FiberCondition> fibers;      // kept sorted by canonicalize()
    std::optional<int> marked_curve_degree;  // in [k+l, k+l+1] when present
    int fixed_curve_points = 0;              // points already pinned on the curve

    auto operator<=>(const ScrollProblem&) const = default;
};

// Builds the root problem for a characteristic-number computation: all
// conditions Free, targeting the surface, no curve marked yet.
ScrollProblem make_scroll_problem(const IncidenceProblem& problem);

// Sorts conditions and fibers into canonical order. Idempotent; two inputs
// differing only by permutation canonicalize identically, which is what makes
// the memo key (and hence the computed value) independent of input order.
ScrollProblem canonicalize(ScrollProblem problem);

// Whitespace-free canonical key, used for memoization and the on-disk cache.
std::string problem_key(const ScrollProblem& problem);

// ---------------------------------------------------------------------------
// Branches and traces
// ---------------------------------------------------------------------------

// The limit configurations a single specialization step can produce.
enum class BranchCase {
    SectionTransfer,       // surface stays irreducible; the moved condition
                           // transfers to the marked section curve in H
    SurfaceIntoHyperplane, // the whole surface specializes into H
    SubscrollBreak,        // S degenerates to (subscroll in H) ∪ (residual
                           // scroll), glued along a common fiber
    ConeLimit,             // cone-centered limit: enumerated for the audit
                           // trail, pruned as contributing 0 to these counts
    PerfectSplit,          // degree-2 case: the quadric splits into two planes
    CurvePointPin,         // curve condition in Π becomes a pinned point
    FiberBreakPlaneLine,   // marked curve breaks off a fiber lying in Π
    FiberBreakPlaneConic,  // the residual conic of the curve falls into Π
    IntersectionChoice     // vacuous incidence resolved by degree: the choice
                           // of intersection point contributes a factor
};

const char* to_string(BranchCase c);

// One branch of a specialization step. subproblems has one entry for an
// irreducible limit or a break whose two sides are bundled into a joint base
// count, and two entries for a split evaluated as a product of independent
// counts. An empty subproblems list marks a branch that is structurally dead
// (over-constrained); its value is 0 and `note` says why.
struct Branch {
    BranchCase case_tag = BranchCase::SectionTransfer;
    std::vector<ScrollProblem> subproblems; // 0, 1, or 2 entries
    long multiplicity = 1;                  // geometric multiplicity (always 1 here)
    long combinatorial_factor = 1;          // ways to distribute conditions /
                                            // choices of absorbed geometry
    std::string note;                       // human-readable annotation
};

struct TraceEdge;

// The result of counting a problem, carrying its full derivation tree.
// Invariant (checked by verify_conservation): at every node,
//   value == incidence_factor × (leaf ? base_value
//                                     : Σ_edges mult × comb × Π child values).
struct CountResult {
    mpz_class value = 0;
    std::string label;           // what this node counts
    long incidence_factor = 1;   // degree factor from vacuous incidences here
    mpz_class base_value = 0;    // leaf count before the incidence factor
    std::vector<TraceEdge> edges;
};

struct TraceEdge {
    Branch branch;
    std::vector<CountResult> children; // one per subproblem (may be empty)
};

// Sum over edges of mult × comb × product of child values.
mpz_class edge_sum(const CountResult& node);

// Checks the conservation invariant on the whole tree; throws AuditError
// with the offending node's label if it fails anywhere.
void verify_conservation(const CountResult& node);

// ---------------------------------------------------------------------------
// Recursion steps (exposed for audit and tests; count() is built on these)
// ---------------------------------------------------------------------------

// True iff `next` is the condition the certified specialization order moves
// at this state. The order keeps one point condition outside H permanently
// (so a break never puts every point on one side), specializes points while
// the marked curve still moves in a positive-dimensional family, and only
// then specializes the remaining non-point conditions. Conservative: a
// `false` answer means the engine refuses rather than risking a branch
// catalog gap.
bool certify_nondegeneracy(const ScrollProblem& problem, const Condition& next);

// Branches produced by specializing `moved` (a Free surface condition) into
// the hyperplane H. Emits exactly the applicable cases, including
// structurally dead ones (empty subproblems, value 0) and the pruned cone
// branch, so the trace accounts for every limit configuration.
std::vector<Branch> enumerate_H_branches(const ScrollProblem& problem, const Condition& moved);

// Branches produced by specializing `moved` (a marked-curve condition) into
// the plane Π. Implemented for the degree-3 marked curve on a quadric, which
// is the only place the recursion needs it.
std::vector<Branch> enumerate_Pi_branches(const ScrollProblem& problem, const Condition& moved);

// Degree factor for a condition that becomes vacuous in a limit: a
// codimension-1 incidence on the surface is traded for deg(S) = k+l, a
// hyperplane condition on the marked curve for deg(C). Throws
// InvalidConditionError if the condition is not of either shape.
long incidence_factor(const ScrollProblem& problem, const Condition& cond);

// Base count for a plane problem (spec (0,1)): Schubert calculus on the
// Grassmannian of planes. Conditions of dimension a contribute the class of
// planes meeting a general a-space; a FiberCondition with contain_dim = 2
// contributes the class of planes meeting a fixed plane in a line. Throws
// BaseCaseGapError for shapes outside the catalog.
mpz_class resolve_plane_base(const ScrollProblem& problem);

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

class DegenerationEngine {
public:
    // Counts the problem exactly, memoized on the canonical key. Throws
    // ScopeError/BaseCaseGapError when no specialization order can be
    // certified or a base count is missing; never returns a guess. The
    // result is independent of input condition order (canonicalization).
    CountResult count(const ScrollProblem& problem);
    CountResult count(const IncidenceProblem& problem);

    // Step-by-step narrative of the derivation tree for count(problem).
    std::string explain(const ScrollProblem& problem);
    std::string explain(const IncidenceProblem& problem);

    // True iff the engine certifies a specialization order for this problem
    // shape. Suitable as the OrderCertifier argument of scope_check().
    bool certifies(const IncidenceProblem& problem) const;

    // Memo contents as (canonical key, value) pairs, for the on-disk cache.
    std::vector<std::pair<std::string, mpz_class>> memo_entries() const;

    // Merges a cached value. Throws CacheIntegrityError if the key is
    // already present with a different value.
    void import_memo(const std::string& key, const mpz_class& value);

private:
    CountResult count_impl(const ScrollProblem& canonical);

    mutable std::mutex memo_mutex_;
    std::map<std::string, CountResult> memo_;
};

} // namespace scrollcount
