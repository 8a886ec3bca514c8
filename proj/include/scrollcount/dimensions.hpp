#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "scrollcount/partitions.hpp"

namespace scrollcount {

// Every closed-form dimension formula used by the counting pipeline, plus the
// scope classifier that decides whether the degeneration recursion may accept
// a problem. All formulas are exact integer arithmetic.

// A rational normal surface scroll S_{k,l} ⊂ P^N of bidegree (k,l), degree
// k+l, swept by lines joining a degree-k and a degree-l rational normal
// curve. Perfectly balanced scrolls (k = l) are treated as having no
// distinguished directrix; the flag is consulted by the building-block
// dimension dispatch.
struct ScrollSpec {
    int N = 3;
    int k = 0;
    int l = 1;
    bool no_directrix = false; // set automatically for k == l

    ScrollSpec() = default;
    ScrollSpec(int N_, int k_, int l_) : N(N_), k(k_), l(l_), no_directrix(k_ == l_) {
        if (k < 0 || l < k || l == 0)
            throw InvalidConditionError("scroll bidegree requires 0 <= k <= l, l > 0");
        if (N < k + l + 1)
            throw InvalidConditionError("ambient P^N too small for a scroll of degree " +
                                        std::to_string(k + l));
    }

    int degree() const { return k + l; }
    bool balanced() const { return l - k <= 1; }
    bool perfectly_balanced() const { return k == l; }
    int delta() const { return k == l ? 1 : 0; } // Kronecker delta δ_{k,l}

    auto operator<=>(const ScrollSpec&) const = default;
};

// Dimension of the family of scrolls S_{k,l} in P^N:
//   (k+l+2)·N + 2k − 4 − δ_{k,l}.
int scroll_family_dim(const ScrollSpec& spec);

// Projective dimension of the section series |e + mf| on S_{k,l}:
//   max(k − l + 2m + 1, m).
// The hyperplane series is m = l (dimension k+l+1); a marked section curve of
// degree d sits in |e + (d−k)f|.
int section_series_dim(const ScrollSpec& spec, int m);

// A characteristic-number problem: scrolls of the given spec meeting general
// linear subspaces of the listed dimensions. Condition dims are kept sorted
// increasing.
struct IncidenceProblem {
    ScrollSpec spec;
    std::vector<int> cond_dims;

    IncidenceProblem() = default;
    IncidenceProblem(ScrollSpec s, std::vector<int> dims);

    // From the table notation n(N; k,l; a_0, a_1, ..., a_r): a_j copies of a
    // j-dimensional condition.
    static IncidenceProblem from_counts(int N, int k, int l, const std::vector<int>& a_counts);

    // Counts per dimension (inverse of from_counts).
    std::vector<int> to_counts() const;

    int num_points() const;

    auto operator<=>(const IncidenceProblem&) const = default;
};

// Σ_i (N − 2 − a_i): the total number of conditions imposed. Equals the
// family dimension exactly when the problem is zero-dimensional.
int condition_sum(const IncidenceProblem& problem);

bool is_enumerative(const IncidenceProblem& problem);

// Dimension constraint on a genus-zero Gromov–Witten query on G(1,N):
//   Σ codim(γ_i) = (2N−2) + d·(N+1) + n − 3.
bool kontsevich_dimension_check(int N, int d, const std::vector<Partition>& classes);

// --- Building-block dimensions ------------------------------------------

// The mutual configuration of the two marked sections C (degree d) and D
// (degree e) relative to the fixed hyperplane and the directrix.
enum class CurveConfig {
    BothInH,         // C and D both lie in the hyperplane
    BothDirectrix,   // C = D = directrix
    Coincident,      // C = D, distinct from the directrix, not in H
    DirectrixAndH,   // one is the directrix, the other lies in H
    MixedOneFixed,   // D is the directrix or lies in H; C is a free section
    Distinct,        // C ≠ D, neither the directrix, neither in H
};

// The locus of scrolls with two marked sections having prescribed contact
// with a fixed hyperplane (orders m_i along m fibers) and with each other
// (orders n_i along further fibers).
struct BuildingBlockSpec {
    ScrollSpec spec;
    std::vector<int> contact_orders;  // m_i >= 1, contact with the hyperplane
    std::vector<int> tangency_orders; // n_i >= 1; length n + m when used
    int n = 0;                        // number of extra common fibers of C and D
    int d = 0;                        // degree of C
    int e = 0;                        // degree of D
    CurveConfig configuration = CurveConfig::BothDirectrix;
};

// Evaluates the building-block dimension formula. The case split is on
// Σ m_i vs k; within each branch the configuration picks the correction α.
// Inconsistent configurations (a directrix on a perfectly balanced scroll,
// contact orders exceeding what the hyperplane section allows, tangency
// lists of the wrong length) throw AuditError.
int building_block_dim(const BuildingBlockSpec& bbs);

// --- Gluing codimension ---------------------------------------------------

// A connected tree of v scroll components with e1 edges glued along a fiber
// in one surface only and e2 edges glued along common fibers.
struct GluingSpec {
    int v = 1;
    int e1 = 0;
    int e2 = 0;

    GluingSpec() = default;
    GluingSpec(int v_, int e1_, int e2_) : v(v_), e1(e1_), e2(e2_) {
        if (v < 1 || e1 < 0 || e2 < 0 || e1 + e2 > v - 1)
            throw InvalidConditionError("gluing tree requires v >= 1 and e1+e2 <= v-1");
    }
};

// Codimension of the glued locus in the space of maps: (2N−2)(v−1) + e1 + 2e2.
int gluing_codim(const GluingSpec& spec, int N);

// --- Scope classification --------------------------------------------------

enum class ProblemScope {
    InScope,           // the literal hypotheses of the counting theorem hold
    OrderVariantScope, // a certified specialization order exists
    OutOfScope,        // refuse: unbalanced, or no certified order
};

// Callback with which the degeneration engine reports whether it can certify
// some specialization order for the problem.
using OrderCertifier = std::function<bool(const IncidenceProblem&)>;

// Classifies a problem against the counting theorem's hypotheses:
//   1. the condition sum equals the family dimension,
//   2. max a_i ≤ N − k − l − 1,
//   3. the first k+l+1 conditions (sorted increasing) are points,
//   4. a_{k+l+2+j} ≤ N − k − l − 1 for 0 ≤ j ≤ max a_i + 1,
// with all a_i < N − 2 and the bidegree balanced. When the literal check
// fails, defers to the certifier (if supplied) for OrderVariantScope.
ProblemScope scope_check(const IncidenceProblem& problem, const OrderCertifier& certifier = {});

} // namespace scrollcount
