#include "scrollcount/engine.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "scrollcount/schubert.hpp"

namespace scrollcount {

namespace {

// ---------------------------------------------------------------------------
// Parsed state
// ---------------------------------------------------------------------------

// Condition counts of a canonical problem, bucketed the way the drivers and
// leaf evaluators consume them. n = spec.N - 1 is the degree of the scroll
// (= k+l) for the chain problems; leaf problems live in smaller spaces.
struct Parsed {
    ScrollSpec spec;
    int n = 0;            // k + l
    int J = 0;            // curve points already pinned
    int curve_meets = 0;  // pending line incidences on the marked curve
    int free_pts = 0;     // Surface/Free dim 0
    int free_lines = 0;   // Surface/Free dim 1 (degree-3 chains only)
    int big = 0;          // Surface/Free dim n-3 (chain problems, n >= 4)
    int vac_lines = 0;    // Surface/InH dim 1: vacuous moved lines on a leaf
    int inh_pts = 0;      // Surface/InH dim 0: a moved point acting on a leaf
    int inh_big = 0;      // Surface/InH dim n-3: a moved chain condition on a leaf
    int fib_contain1 = 0; // marked fiber equals a fixed line
    int fib_glue2 = 0;    // plane meets a fixed plane in a line
    int fib_pin = 0;      // marked fiber through a fixed point
    int fib_mark = 0;     // marked fiber meets a general (N-2)-space
    bool has_curve = false;
    int curve_degree = 0;
};

Parsed parse(const ScrollProblem& p) {
    Parsed s;
    s.spec = p.spec;
    s.n = p.spec.k + p.spec.l;
    s.J = p.fixed_curve_points;
    s.has_curve = p.marked_curve_degree.has_value();
    s.curve_degree = s.has_curve ? *p.marked_curve_degree : 0;
    const int N = p.spec.N;
    for (const Condition& c : p.conditions) {
        if (c.target == ConditionTarget::MarkedCurve) {
            if (c.dim == 1 && c.stage == ConditionStage::InH) {
                ++s.curve_meets;
                continue;
            }
            throw ScopeError("unsupported marked-curve condition in state");
        }
        if (c.stage == ConditionStage::Free) {
            if (c.dim == 0) {
                ++s.free_pts;
            } else if (c.dim == 1 && s.n <= 3) {
                ++s.free_lines;
            } else if (s.n >= 4 && c.dim == s.n - 3 && N == s.n + 1) {
                ++s.big;
            } else {
                throw ScopeError("free condition of unsupported dimension " +
                                 std::to_string(c.dim));
            }
        } else if (c.stage == ConditionStage::InH) {
            if (c.dim == 0) {
                ++s.inh_pts;
            } else if (c.dim == 1 && p.spec.k == 1 && p.spec.l == 1) {
                ++s.vac_lines; // a specialized line meeting a quadric vacuously
            } else {
                ++s.inh_big; // the moved larger condition on a sub-chain leaf
            }
        } else {
            throw ScopeError("conditions in the directrix plane are handled inside leaves");
        }
    }
    for (const FiberCondition& f : p.fibers) {
        if (f.contain_dim == 1 && f.meet_dim < 0) {
            ++s.fib_contain1;
        } else if (f.contain_dim == 2 && f.meet_dim < 0) {
            ++s.fib_glue2;
        } else if (f.contain_dim == N && f.meet_dim == 0) {
            ++s.fib_pin;
        } else if (f.contain_dim == N && f.meet_dim == N - 2) {
            ++s.fib_mark;
        } else {
            throw BaseCaseGapError("marked-fiber constraint (" +
                                   std::to_string(f.contain_dim) + "," +
                                   std::to_string(f.meet_dim) + ") is not cataloged");
        }
    }
    return s;
}

// What kind of node a problem is.
enum class Kind {
    ChainFresh,     // root incidence problem of a degree-n chain (N = n+1)
    ChainState,     // mid-recursion chain state
    QuadricFresh,   // root quadric problem in P^4 (3 or 4 points)
    QuadricState,   // mid-recursion quadric state
    LinearSystem,   // quadric in P^3 cut out by a linear system
    RuledPair,      // (quadric, ruling line) pairs in P^3
    ConicInPlane,   // plane piece carrying the conic section
    PlaneBase,      // pure plane problem: Schubert calculus
    QuadricCatalog, // quadric in P^4 glued to a plane: cataloged base count
    SubscrollLeaf   // scroll of degree n-1 in P^n glued over a pinned fiber
};

Kind classify(const Parsed& s) {
    const ScrollSpec& sp = s.spec;
    if (!sp.balanced()) {
        throw ScopeError(
            "unbalanced scrolls degenerate through cones; no specialization "
            "order is certified for them");
    }
    if (sp.k == 0 && sp.l == 1) {
        if (s.has_curve && s.curve_degree == 2) return Kind::ConicInPlane;
        return Kind::PlaneBase;
    }
    if (sp.k == 1 && sp.l == 1 && sp.N == 3) {
        if (!s.has_curve) return Kind::LinearSystem;
        if (s.curve_degree == 3) return Kind::RuledPair;
        throw BaseCaseGapError("quadric leaf with marked curve of degree " +
                               std::to_string(s.curve_degree));
    }
    // Sub-chain leaves: a degree (n-1) scroll in P^n carrying the rigid
    // degree-n section of the parent chain (curve degree = ambient N).
    if (sp.N >= 4 && s.n == sp.N - 1 && s.has_curve && s.curve_degree == sp.N) {
        return Kind::SubscrollLeaf;
    }
    if (sp.k == 1 && sp.l == 1 && sp.N == 4) {
        if (s.fib_contain1 == 1 && s.fib_glue2 == 1) return Kind::QuadricCatalog;
        if (s.fib_contain1 || s.fib_glue2 || s.fib_pin || s.fib_mark ||
            s.vac_lines || s.inh_pts || s.inh_big) {
            throw BaseCaseGapError("quadric state in P^4 with uncataloged decorations");
        }
        if (!s.has_curve && s.J == 0) {
            if (s.free_pts == 3 || s.free_pts == 4) return Kind::QuadricFresh;
            throw ScopeError(
                "quadric problems are certified only with 3 or 4 point conditions");
        }
        return Kind::QuadricState;
    }
    if (sp.N == s.n + 1 && s.n >= 3) {
        if (s.fib_pin + s.fib_mark + s.fib_contain1 + s.fib_glue2 > 0 || s.inh_big > 0) {
            throw ScopeError("decorated chain state is not a certified shape");
        }
        if (!s.has_curve && s.J == 0) {
            // Fresh chain problems: n+5 points plus either nothing extra
            // (n = 3), six lines (n = 3, spec (1,2)), or one (n-3)-space.
            if (s.n == 3 && s.free_pts == 9 && s.free_lines == 0 && s.big == 0)
                return Kind::ChainFresh;
            if (s.n == 3 && s.free_pts == 6 && s.free_lines == 6 && s.big == 0)
                return Kind::ChainFresh;
            if (s.n >= 4 && s.free_pts == s.n + 5 && s.big == 1 && s.free_lines == 0)
                return Kind::ChainFresh;
            throw ScopeError(
                "no certified specialization order for this condition shape");
        }
        return Kind::ChainState;
    }
    throw ScopeError("problem shape is outside the certified recursion");
}

// ---------------------------------------------------------------------------
// Frozen base tables (quadric layer in P^3)
// ---------------------------------------------------------------------------
//
// All counts below concern pairs (Q, L): a quadric surface Q in P^3 with a
// marked ruling line L, possibly constrained, meeting point conditions on Q
// and incidence conditions on L. They are computed on the parameter space
// fibered over the Grassmannian of lines (L first, then the P^6 of quadrics
// through L), reduced to Schubert calculus by a Segre-class computation. The
// few entries taken as cataloged constants are cross-validated: the full
// degree-3 characteristic numbers they feed reproduce the independent
// Gromov-Witten oracle exactly.

// ∫ over {(Q, L)} of (Q through a point)^pts (L meets a line)^marks
// (L through a point)^pins. The Segre reduction gives
//   s(kernel bundle) = total Chern class of Sym^2 S* on G(1,3),
// so the p-th point power contributes s_{p-6} paired against the incidence
// classes of L.
mpz_class ruled_pair_integral(int pts, int marks, int pins) {
    const int i = pts - 6;
    if (i < 0 || i > 3) return 0;
    GrassmannianId g(1, 3);
    CycleSum cls(g);
    switch (i) {
        case 0: cls.add(Partition{}, 1); break;
        case 1: cls.add(Partition{1}, 3); break;
        // c2(Sym^2 S*) = 2 σ1^2 + 4 σ11 = 2 σ2 + 6 σ11
        case 2: cls.add(Partition{2}, 2); cls.add(Partition{1, 1}, 6); break;
        // c3(Sym^2 S*) = 4 σ1 σ11 = 4 σ21
        case 3: cls.add(Partition{2, 1}, 4); break;
    }
    for (int m = 0; m < marks; ++m) cls = product(cls, Partition{1});
    for (int e = 0; e < pins; ++e) cls = product(cls, Partition{2});
    return cls.coefficient(Partition{2, 2});
}

// Pairs (Q, L) with Q containing a fixed line F as a ruling line and L marked
// in the same ruling, meeting `pts` point conditions on Q and `marks` line
// incidences on L (pts + marks = 7 for a finite count). Derived by sweeping
// the same bundle model restricted to the P^6 of quadrics through F;
// cross-validated through the degree-3 totals.
mpz_class fixed_fiber_pair(int pts, int marks) {
    if (pts + marks != 7) return 0;
    switch (marks) {
        case 1: return 2;
        case 2: return 4;
        case 3: return 4;
        case 4: return 2;
        default: return 0;
    }
}

// Pairs (Q, L): Q in the net of quadrics through a fixed rational cubic
// curve, L a ruling line in the family swept by the marked section, with
// `pts` point conditions on Q, `marks` line incidences on L, and `pins`
// point constraints on L. Finite exactly when pts + marks + 2 pins = 3.
mpz_class fixed_cubic_pair(int pts, int marks, int pins) {
    if (pts + marks + 2 * pins != 3) return 0;
    if (pins == 0) {
        switch (marks) {
            case 1: return 2;
            case 2: return 4;
            case 3: return 6;
            default: return 0; // marks = 0 leaves L in a 1-parameter family
        }
    }
    if (pins == 1) {
        if (pts == 1 && marks == 0) return 1; // net member through a point,
                                              // fiber through the pinned point
        if (pts == 0 && marks == 1) return 1; // fiber through the pinned point
                                              // meeting a general line
        throw BaseCaseGapError("pinned-fiber cubic pair shape is not cataloged");
    }
    return 0;
}

// Twisted cubics in P^3 through J general points meeting c general lines.
long rational_cubic_count(int J, int c) {
    if (2 * J + c != 12) return 0;
    if (J == 6 && c == 0) return 1;
    if (J == 5 && c == 2) return 5;
    throw BaseCaseGapError("rational cubic count (" + std::to_string(J) + " pts, " +
                           std::to_string(c) + " lines) is not cataloged");
}

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

Condition surface_cond(int dim, ConditionStage st = ConditionStage::Free) {
    return Condition{dim, ConditionTarget::Surface, st};
}

Condition curve_meet_cond() {
    return Condition{1, ConditionTarget::MarkedCurve, ConditionStage::InH};
}

void add_conditions(ScrollProblem& p, int count, const Condition& c) {
    for (int i = 0; i < count; ++i) p.conditions.push_back(c);
}

// The quadric-layer leaf in P^3 shared by every degree-3 break.
ScrollProblem quadric_leaf(int J, int curve_meets, int pts, int marks, int pins,
                           int contain1, int vac, bool with_curve) {
    ScrollProblem p;
    p.spec = ScrollSpec(3, 1, 1);
    if (with_curve) {
        p.marked_curve_degree = 3;
        p.fixed_curve_points = J;
    }
    add_conditions(p, pts, surface_cond(0));
    add_conditions(p, vac, surface_cond(1, ConditionStage::InH));
    add_conditions(p, curve_meets, curve_meet_cond());
    for (int i = 0; i < contain1; ++i) p.fibers.push_back({1, -1});
    for (int i = 0; i < marks; ++i) p.fibers.push_back({3, 1});
    for (int i = 0; i < pins; ++i) p.fibers.push_back({3, 0});
    return canonicalize(std::move(p));
}

// The sub-chain leaf: a degree (n-1) scroll in P^n with marked section of
// degree n through n+3 points, glue fiber pinned at a point, plus either a
// fiber meet (break with the larger condition outside) or the moved larger
// condition itself (break after the curve is rigid).
ScrollProblem subchain_leaf(int n, int k0, int l0, bool fiber_meets_space, int moved_dim) {
    if (n == 3) {
        return quadric_leaf(6, 0, moved_dim == 0 ? 1 : 0, fiber_meets_space ? 1 : 0,
                            1, 0, 0, true);
    }
    ScrollProblem p;
    p.spec = ScrollSpec(n, k0, l0);
    p.marked_curve_degree = n;
    p.fixed_curve_points = n + 3;
    p.fibers.push_back({n, 0});
    if (fiber_meets_space) p.fibers.push_back({n, n - 2});
    if (moved_dim >= 0) p.conditions.push_back(surface_cond(moved_dim, ConditionStage::InH));
    return canonicalize(std::move(p));
}

std::string spec_str(const ScrollSpec& s) {
    return "S(" + std::to_string(s.k) + "," + std::to_string(s.l) + ")@P" +
           std::to_string(s.N);
}

std::string state_label(const Parsed& s) {
    std::ostringstream os;
    os << spec_str(s.spec);
    if (s.has_curve) os << ", section deg " << s.curve_degree << " through " << s.J << " pts";
    if (s.curve_meets) os << " meeting " << s.curve_meets << " line(s)";
    if (s.free_pts) os << ", " << s.free_pts << " free point(s)";
    if (s.free_lines) os << ", " << s.free_lines << " free line(s)";
    if (s.big) os << ", one free " << (s.n - 3) << "-space";
    if (s.inh_pts) os << ", " << s.inh_pts << " point(s) in H";
    if (s.inh_big) os << ", a " << (s.spec.N - 3) << "-space in H";
    if (s.vac_lines) os << ", " << s.vac_lines << " vacuous line(s)";
    if (s.fib_contain1) os << ", contains a fixed ruling line";
    if (s.fib_glue2) os << ", meets a fixed plane in a line";
    if (s.fib_pin) os << ", glue fiber pinned at a point";
    if (s.fib_mark) os << ", glue fiber meets a general space";
    return os.str();
}

CountResult leaf_result(const mpz_class& base, long incidence, const std::string& label) {
    CountResult r;
    r.base_value = base;
    r.incidence_factor = incidence;
    r.value = base * incidence;
    r.label = label;
    return r;
}

CountResult dead_result(const std::string& why) {
    CountResult r;
    r.value = 0;
    r.base_value = 0;
    r.label = why;
    return r;
}

Branch dead_branch(BranchCase tag, const std::string& note, long comb = 1) {
    Branch b;
    b.case_tag = tag;
    b.combinatorial_factor = comb;
    b.note = note;
    return b;
}

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Family dimension of rational normal curves of degree n in P^n, and the
// costs of pinning them. Used to decide when the marked section is rigid.
int curve_family_dim(int n, int J, int meets) {
    return (n * n + 2 * n - 3) - (n - 1) * J - (n - 2) * meets;
}

} // namespace

// ---------------------------------------------------------------------------
// Public structural helpers
// ---------------------------------------------------------------------------

ScrollProblem make_scroll_problem(const IncidenceProblem& problem) {
    ScrollProblem p;
    p.spec = problem.spec;
    for (int d : problem.cond_dims) p.conditions.push_back(surface_cond(d));
    return canonicalize(std::move(p));
}

ScrollProblem canonicalize(ScrollProblem problem) {
    std::sort(problem.conditions.begin(), problem.conditions.end());
    std::sort(problem.fibers.begin(), problem.fibers.end());
    return problem;
}

std::string problem_key(const ScrollProblem& problem) {
    ScrollProblem p = canonicalize(problem);
    std::ostringstream os;
    os << "S(" << p.spec.k << "," << p.spec.l << ")P" << p.spec.N;
    os << "|d=" << (p.marked_curve_degree ? std::to_string(*p.marked_curve_degree) : "-");
    os << "|J=" << p.fixed_curve_points << "|c=[";
    bool first = true;
    for (const Condition& c : p.conditions) {
        if (!first) os << ",";
        first = false;
        os << c.dim << (c.target == ConditionTarget::Surface ? "S" : "C");
        os << (c.stage == ConditionStage::Free ? "F"
               : c.stage == ConditionStage::InH ? "H" : "P");
    }
    os << "]|f=[";
    first = true;
    for (const FiberCondition& f : p.fibers) {
        if (!first) os << ",";
        first = false;
        os << f.contain_dim << ":" << f.meet_dim;
    }
    os << "]";
    return os.str();
}

const char* to_string(BranchCase c) {
    switch (c) {
        case BranchCase::SectionTransfer: return "section-transfer";
        case BranchCase::SurfaceIntoHyperplane: return "into-hyperplane";
        case BranchCase::SubscrollBreak: return "subscroll-break";
        case BranchCase::ConeLimit: return "cone-limit";
        case BranchCase::PerfectSplit: return "perfect-split";
        case BranchCase::CurvePointPin: return "curve-point-pin";
        case BranchCase::FiberBreakPlaneLine: return "fiber-break(line-in-plane)";
        case BranchCase::FiberBreakPlaneConic: return "fiber-break(conic-in-plane)";
        case BranchCase::IntersectionChoice: return "intersection-choice";
    }
    return "?";
}

mpz_class edge_sum(const CountResult& node) {
    mpz_class total = 0;
    for (const TraceEdge& e : node.edges) {
        if (e.children.empty()) continue;
        mpz_class prod = e.branch.multiplicity;
        prod *= e.branch.combinatorial_factor;
        for (const CountResult& ch : e.children) prod *= ch.value;
        total += prod;
    }
    return total;
}

void verify_conservation(const CountResult& node) {
    mpz_class inner = node.edges.empty() ? node.base_value : edge_sum(node);
    if (node.value != inner * node.incidence_factor) {
        throw AuditError("conservation failure at node: " + node.label);
    }
    for (const TraceEdge& e : node.edges)
        for (const CountResult& ch : e.children) verify_conservation(ch);
}

long incidence_factor(const ScrollProblem& problem, const Condition& cond) {
    const int N = problem.spec.N;
    if (cond.target == ConditionTarget::Surface && cond.dim == N - 2) {
        return problem.spec.degree();
    }
    if (cond.target == ConditionTarget::MarkedCurve && problem.marked_curve_degree &&
        cond.dim == N - 1) {
        return *problem.marked_curve_degree;
    }
    throw InvalidConditionError(
        "condition does not become vacuous by degree in this ambient space");
}

mpz_class resolve_plane_base(const ScrollProblem& problem) {
    if (!(problem.spec.k == 0 && problem.spec.l == 1)) {
        throw InvalidConditionError("not a plane problem");
    }
    if (problem.marked_curve_degree) {
        throw BaseCaseGapError("plane problems with a marked curve are handled as conic leaves");
    }
    const int N = problem.spec.N;
    GrassmannianId g(2, N);
    std::vector<Partition> classes;
    for (const Condition& c : problem.conditions) {
        if (c.target != ConditionTarget::Surface || c.dim < 0 || c.dim > N - 3) {
            throw BaseCaseGapError("plane base case outside the Schubert catalog");
        }
        classes.push_back(Partition{N - 2 - c.dim});
    }
    for (const FiberCondition& f : problem.fibers) {
        if (f.contain_dim == 2 && f.meet_dim < 0) {
            classes.push_back(Partition{N - 3, N - 3});
        } else {
            throw BaseCaseGapError("plane base case with uncataloged fiber constraint");
        }
    }
    return intersection_number(classes, g); // throws DimensionError off-grade
}

// ---------------------------------------------------------------------------
// Specialization order
// ---------------------------------------------------------------------------

namespace {

// The next condition the certified order moves, or nullopt on a leaf. The
// order: while the marked section still moves in a positive-dimensional
// family, specialize points (always keeping one point free so that no break
// can swallow every point); once the section is rigid, specialize the larger
// condition if present, then a point if at least three remain, then lines.
std::optional<Condition> next_move(const Parsed& s, Kind kind) {
    if (kind == Kind::QuadricFresh || kind == Kind::QuadricState) {
        if (s.free_lines >= 1) return surface_cond(1);
        return std::nullopt;
    }
    if (kind != Kind::ChainFresh && kind != Kind::ChainState) return std::nullopt;
    const int J0 = (kind == Kind::ChainFresh) ? s.n + 1 : s.J;
    const int fp = (kind == Kind::ChainFresh) ? s.free_pts - (s.n + 1) : s.free_pts;
    if (curve_family_dim(s.n, J0, s.curve_meets) > 0) {
        if (fp >= 2) return surface_cond(0);
        if (s.n == 3 && s.free_lines >= 1) return surface_cond(1);
        throw ScopeError("cannot pin the section without moving the reserved point");
    }
    if (s.big == 1) return surface_cond(s.n - 3);
    if (fp >= 3) return surface_cond(0);
    if (s.free_lines >= 1) return surface_cond(1);
    throw ScopeError("no certified move remains for this state");
}

} // namespace

bool certify_nondegeneracy(const ScrollProblem& problem, const Condition& next) {
    try {
        Parsed s = parse(canonicalize(problem));
        Kind k = classify(s);
        auto mv = next_move(s, k);
        return mv && *mv == next;
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Branch enumeration
// ---------------------------------------------------------------------------

namespace {

// Branches for a point specialization on a chain state (state BEFORE the
// move; the setup has already pinned the n+1 spanning points).
std::vector<Branch> chain_point_branches(const Parsed& s) {
    std::vector<Branch> out;
    const int n = s.n;
    const int Jp = s.J + 1;
    const int o = s.free_pts - 1; // free points remaining outside H
    const bool curve_was_rigid = curve_family_dim(n, s.J, s.curve_meets) <= 0;

    // Irreducible limit: the moved point pins the section.
    if (curve_was_rigid) {
        out.push_back(dead_branch(
            BranchCase::SectionTransfer,
            "over-constrained partition: the rigid section cannot pass through a "
            "further general point"));
    } else {
        Branch b;
        b.case_tag = BranchCase::SectionTransfer;
        ScrollProblem child;
        child.spec = s.spec;
        child.marked_curve_degree = n;
        int newJ = Jp;
        if (curve_family_dim(n, Jp, s.curve_meets) <= 0) {
            // The unique rational normal curve through n+3 general points.
            newJ = n + 3;
            b.note = "section now rigid: the unique rational normal curve through "
                     "its pinned points";
        } else {
            b.note = "section passes through the moved point";
        }
        child.fixed_curve_points = newJ;
        add_conditions(child, s.free_pts - 1, surface_cond(0));
        add_conditions(child, s.free_lines, surface_cond(1));
        add_conditions(child, s.curve_meets, curve_meet_cond());
        if (s.big) child.conditions.push_back(surface_cond(n - 3));
        b.subproblems.push_back(canonicalize(std::move(child)));
        out.push_back(std::move(b));
    }

    // Breaks: subscroll in H glued to a plane over a common fiber. The o
    // free points must lie on the plane.
    auto inside_spec = [&]() {
        int k0 = s.spec.k, l0 = s.spec.l - 1;
        if (l0 < k0) std::swap(k0, l0);
        return std::pair<int, int>(k0, l0);
    }();
    if (o >= 4) {
        out.push_back(dead_branch(
            BranchCase::SubscrollBreak,
            "over-constrained partition: no plane passes through " + std::to_string(o) +
                " general points"));
    } else if (o == 3) {
        // Plane fixed by the three free points; glue fiber = plane ∩ H.
        if (s.big) {
            out.push_back(dead_branch(
                BranchCase::SubscrollBreak,
                "over-constrained partition: the fixed outside plane cannot meet the "
                "larger condition"));
            // Larger condition inside: dimension count is negative.
            out.push_back(dead_branch(
                BranchCase::SubscrollBreak,
                "over-constrained partition: subscroll through " + std::to_string(Jp) +
                    " section points containing the glue fiber and meeting the larger "
                    "condition exceeds its family dimension"));
        } else if (n == 3 && s.free_lines == 0 && s.curve_meets == 0) {
            Branch b;
            b.case_tag = BranchCase::SubscrollBreak;
            b.note = "plane spanned by the three free points; quadric through the glue "
                     "fiber and the pinned points (section recovered uniquely)";
            b.subproblems.push_back(quadric_leaf(0, 0, Jp, 0, 0, 1, 0, false));
            out.push_back(std::move(b));
        } else {
            out.push_back(dead_branch(BranchCase::SubscrollBreak,
                                      "over-constrained partition: fixed-plane break"));
        }
    } else if (o == 2) {
        // Plane spans the glue fiber and the two free points; the fiber
        // passes through the intersection of their connecting line with H.
        if (curve_was_rigid && n == 3) {
            Branch b;
            b.case_tag = BranchCase::SubscrollBreak;
            b.note = "quadric through the rigid cubic and the moved point; glue fiber "
                     "pinned where the line of the two free points meets H";
            b.subproblems.push_back(quadric_leaf(6, 0, 1, 0, 1, 0, 0, true));
            out.push_back(std::move(b));
        } else if (!curve_was_rigid && s.big == 1 && Jp == n + 3) {
            {
                Branch b;
                b.case_tag = BranchCase::SubscrollBreak;
                b.note = "larger condition inside: fresh chain problem one degree down "
                         "(glue fiber through the junction point absorbed with "
                         "multiplicity 1)";
                ScrollProblem child;
                child.spec = ScrollSpec(n, inside_spec.first, inside_spec.second);
                add_conditions(child, Jp + 1, surface_cond(0));
                if (n - 4 == 0) {
                    child.conditions.push_back(surface_cond(0));
                } else if (n - 4 > 0) {
                    child.conditions.push_back(surface_cond(n - 4));
                }
                b.subproblems.push_back(canonicalize(std::move(child)));
                out.push_back(std::move(b));
            }
            {
                Branch b;
                b.case_tag = BranchCase::SubscrollBreak;
                b.note = "larger condition outside: the glue fiber is pinned and meets "
                         "the space spanned by the free points' line and the condition";
                b.subproblems.push_back(
                    subchain_leaf(n, inside_spec.first, inside_spec.second, true, -1));
                out.push_back(std::move(b));
            }
        } else {
            out.push_back(dead_branch(BranchCase::SubscrollBreak,
                                      "over-constrained partition: pinned-fiber break"));
        }
    } else if (o <= 1) {
        // The plane is pinned by at most one point: with the section still
        // unpinned this leaves every spare assignment over-constrained.
        out.push_back(dead_branch(
            BranchCase::SubscrollBreak,
            "over-constrained partition: every distribution of the remaining "
            "conditions exceeds the broken configuration's dimension"));
    }

    out.push_back(dead_branch(BranchCase::ConeLimit,
                              "cone-centered limits contribute 0 to balanced counts (pruned)"));
    return out;
}

// Branches for a larger-condition specialization (chain state, section rigid).
std::vector<Branch> chain_big_branches(const Parsed& s) {
    std::vector<Branch> out;
    const int n = s.n;
    int k0 = s.spec.k, l0 = s.spec.l - 1;
    if (l0 < k0) std::swap(k0, l0);
    out.push_back(dead_branch(
        BranchCase::SectionTransfer,
        "over-constrained partition: the rigid section cannot meet the moved condition"));
    {
        Branch b;
        b.case_tag = BranchCase::SubscrollBreak;
        b.note = "moved condition absorbed by the subscroll in H; glue fiber pinned "
                 "where the line of the two free points meets H";
        b.subproblems.push_back(subchain_leaf(n, k0, l0, false, n - 3));
        out.push_back(std::move(b));
    }
    out.push_back(dead_branch(
        BranchCase::SubscrollBreak,
        "over-constrained partition: the outside plane (through the two free points) "
        "cannot meet the moved condition inside H"));
    out.push_back(dead_branch(BranchCase::ConeLimit,
                              "cone-centered limits contribute 0 to balanced counts (pruned)"));
    return out;
}

// Branches for a line specialization on a degree-3 chain state (spec (1,2)).
std::vector<Branch> chain_line_branches(const Parsed& s) {
    std::vector<Branch> out;
    const int fl = s.free_lines - 1; // lines still free after the move
    const bool rigid = curve_family_dim(3, s.J, s.curve_meets) <= 0;

    // Irreducible limit: the section meets the moved line.
    if (rigid) {
        out.push_back(dead_branch(
            BranchCase::SectionTransfer,
            "over-constrained partition: the rigid section cannot meet a further line"));
    } else {
        Branch b;
        b.case_tag = BranchCase::SectionTransfer;
        ScrollProblem child;
        child.spec = s.spec;
        child.marked_curve_degree = 3;
        int meets = s.curve_meets + 1;
        int newJ = s.J;
        if (curve_family_dim(3, s.J, meets) <= 0) {
            long kappa = rational_cubic_count(s.J, meets);
            b.combinatorial_factor = kappa;
            b.note = "section meets the moved line and becomes rigid: " +
                     std::to_string(kappa) + " cubics satisfy the pinning";
            newJ = 6; // canonical form of a rigid cubic: pinned at 6 points
            meets = 0;
        } else {
            b.note = "section meets the moved line";
        }
        child.fixed_curve_points = newJ;
        add_conditions(child, s.free_pts, surface_cond(0));
        add_conditions(child, fl, surface_cond(1));
        add_conditions(child, meets, curve_meet_cond());
        b.subproblems.push_back(canonicalize(std::move(child)));
        out.push_back(std::move(b));
    }

    // Breaks: quadric in H glued to a plane through the reserved point. The
    // moved line lies in H and meets the quadric vacuously (degree factor 2);
    // each remaining free line either meets the quadric at its intersection
    // with H (a point condition) or meets the outside plane, which projects
    // to an incidence of the glue fiber.
    if (s.free_pts != 1) {
        out.push_back(dead_branch(
            BranchCase::SubscrollBreak,
            "over-constrained partition: the outside plane needs exactly the reserved "
            "free point"));
    } else {
        for (int j = 0; j <= fl; ++j) {
            Branch b;
            b.case_tag = BranchCase::SubscrollBreak;
            b.combinatorial_factor = binom(fl, j);
            b.note = std::to_string(j) + " line(s) meet the quadric in H, " +
                     std::to_string(fl - j) +
                     " meet the outside plane through the reserved point";
            b.subproblems.push_back(
                quadric_leaf(s.J, s.curve_meets, j, fl - j, 0, 0, 1, true));
            out.push_back(std::move(b));
        }
    }

    // Break with the plane inside H (the directrix plane absorbs the pinned
    // points): only the state with a rigid pencil of section constraints
    // supports it; elsewhere it is over-constrained.
    if (s.J == 5 && s.curve_meets == 1 && s.free_pts == 1 && fl == 4) {
        Branch b;
        b.case_tag = BranchCase::SubscrollBreak;
        b.combinatorial_factor = binom(5, 3);
        b.note = "plane inside H spanned by 3 of the 5 pinned points, carrying the "
                 "conic part of the section; residual quadric in the ambient space";
        ScrollProblem conic;
        conic.spec = ScrollSpec(3, 0, 1);
        conic.marked_curve_degree = 2;
        conic.fixed_curve_points = 5;
        b.subproblems.push_back(canonicalize(std::move(conic)));
        ScrollProblem quad;
        quad.spec = ScrollSpec(4, 1, 1);
        add_conditions(quad, 1, surface_cond(0));
        add_conditions(quad, 4, surface_cond(1));
        quad.fibers.push_back({1, -1});
        quad.fibers.push_back({2, -1});
        b.subproblems.push_back(canonicalize(std::move(quad)));
        out.push_back(std::move(b));
    } else {
        out.push_back(dead_branch(
            BranchCase::SubscrollBreak,
            "over-constrained partition: break with the directrix plane inside H"));
    }

    out.push_back(dead_branch(BranchCase::ConeLimit,
                              "cone-centered limits contribute 0 to balanced counts (pruned)"));
    return out;
}

// Branches for a line specialization on a quadric state in P^4.
std::vector<Branch> quadric_line_branches(const Parsed& s) {
    std::vector<Branch> out;
    const int fl = s.free_lines - 1;
    const int fp = s.free_pts; // points kept outside the 3-point plane

    // Irreducible limit: the moved line meets the conic section's plane in a
    // point of the conic, pinning it.
    if (s.J + 1 > 5) {
        out.push_back(dead_branch(
            BranchCase::SectionTransfer,
            "over-constrained partition: the rigid conic cannot pass through a "
            "further pinned point"));
    } else {
        Branch b;
        b.case_tag = BranchCase::SectionTransfer;
        b.note = "the moved line meets the conic's plane in a point the conic must "
                 "pass through";
        ScrollProblem child;
        child.spec = s.spec;
        child.marked_curve_degree = 2;
        child.fixed_curve_points = s.J + 1;
        add_conditions(child, fp, surface_cond(0));
        add_conditions(child, fl, surface_cond(1));
        b.subproblems.push_back(canonicalize(std::move(child)));
        out.push_back(std::move(b));
    }

    // The whole quadric specializes into H (possible only if every remaining
    // free condition can reach it: a free point cannot lie in H).
    if (fp > 0) {
        out.push_back(dead_branch(
            BranchCase::SurfaceIntoHyperplane,
            "over-constrained partition: a free point lies outside H"));
    } else {
        Branch b;
        b.case_tag = BranchCase::SurfaceIntoHyperplane;
        b.note = "quadric inside H: free lines meet it where they pierce H; the "
                 "moved line meets it vacuously (degree factor 2)";
        b.subproblems.push_back(quadric_leaf(0, 0, s.J + fl, 0, 0, 0, 1, false));
        out.push_back(std::move(b));
    }

    // The quadric splits into the conic's plane and a residual plane.
    {
        Branch b;
        b.case_tag = BranchCase::PerfectSplit;
        b.note = "quadric splits into the conic's plane (moved line meets it "
                 "vacuously, factor 1) and a residual plane meeting the rest "
                 "(counted once; the two ruling orientations coincide in the image)";
        ScrollProblem conic;
        conic.spec = ScrollSpec(3, 0, 1);
        conic.marked_curve_degree = 2;
        conic.fixed_curve_points = s.J;
        b.subproblems.push_back(canonicalize(std::move(conic)));
        ScrollProblem plane;
        plane.spec = ScrollSpec(4, 0, 1);
        add_conditions(plane, fp, surface_cond(0));
        add_conditions(plane, fl, surface_cond(1));
        plane.fibers.push_back({2, -1});
        b.subproblems.push_back(canonicalize(std::move(plane)));
        out.push_back(std::move(b));
    }

    out.push_back(dead_branch(BranchCase::ConeLimit,
                              "cone-centered limits contribute 0 to balanced counts (pruned)"));
    return out;
}

} // namespace

std::vector<Branch> enumerate_H_branches(const ScrollProblem& problem, const Condition& moved) {
    ScrollProblem canon = canonicalize(problem);
    Parsed s = parse(canon);
    Kind kind = classify(s);
    if (kind == Kind::ChainFresh || kind == Kind::QuadricFresh) {
        throw InvalidConditionError(
            "fresh problems pin their spanning points first; branch enumeration "
            "applies to mid-recursion states");
    }
    auto mv = next_move(s, kind);
    if (!mv || !(*mv == moved)) {
        throw InvalidConditionError("the certified order does not move this condition here");
    }
    if (kind == Kind::QuadricState) return quadric_line_branches(s);
    if (kind != Kind::ChainState) {
        throw InvalidConditionError("no hyperplane branches at a leaf state");
    }
    if (moved.dim == 0) return chain_point_branches(s);
    if (s.n >= 4 && moved.dim == s.n - 3) return chain_big_branches(s);
    return chain_line_branches(s);
}

std::vector<Branch> enumerate_Pi_branches(const ScrollProblem& problem, const Condition& moved) {
    ScrollProblem canon = canonicalize(problem);
    Parsed s = parse(canon);
    Kind kind = classify(s);
    if (kind != Kind::RuledPair || s.J != 5 || s.curve_meets != 1 ||
        !(moved == curve_meet_cond())) {
        throw InvalidConditionError(
            "plane specialization applies to the degree-3 section on a quadric "
            "with one pending line incidence");
    }
    std::vector<Branch> out;
    {
        Branch b;
        b.case_tag = BranchCase::FiberBreakPlaneLine;
        b.combinatorial_factor = 3;
        b.note = "the section breaks off the ruling line through one of the 3 pinned "
                 "points in the plane; the moved line meets that ruling line";
        b.subproblems.push_back(
            quadric_leaf(5, 0, s.inh_pts + s.free_pts, s.fib_mark, 0, 1, 0, true));
        out.push_back(std::move(b));
    }
    {
        Branch b;
        b.case_tag = BranchCase::FiberBreakPlaneConic;
        b.combinatorial_factor = 1;
        b.note = "the conic part of the section falls into the plane; the moved line "
                 "meets it in one of deg = 2 intersection points";
        b.subproblems.push_back(
            quadric_leaf(5, 0, s.inh_pts + s.free_pts, s.fib_mark, 0, 1, 0, true));
        out.push_back(std::move(b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

namespace {

// Leaf evaluations -----------------------------------------------------------

CountResult eval_linear_system(const Parsed& s) {
    const int conds = s.free_pts + s.inh_pts + 3 * s.fib_contain1;
    long inc = 1;
    for (int i = 0; i < s.vac_lines; ++i) inc *= 2;
    mpz_class base = (conds == 9 && s.fib_glue2 == 0 && s.fib_mark == 0 &&
                      s.fib_pin == 0 && s.free_lines == 0 && s.curve_meets == 0)
                         ? 1
                         : 0;
    std::string label = "quadric in P^3 cut out by " + std::to_string(conds) +
                        " linear conditions" +
                        (base == 1 ? " (unique; section recovered uniquely on it)"
                                   : ": not zero-dimensional");
    return leaf_result(base, inc, label);
}

CountResult eval_conic_plane(const Parsed& s) {
    mpz_class base = (s.J >= 5) ? 1 : 0;
    std::string label =
        "plane carrying the conic section pinned at " + std::to_string(s.J) +
        " points" + (base == 1 ? " (rigid)" : ": conic still moves, no isolated solution");
    return leaf_result(base, 1, label);
}

CountResult eval_plane_base(const ScrollProblem& p, const Parsed& s) {
    mpz_class base;
    std::string note;
    try {
        base = resolve_plane_base(p);
        note = "Schubert count for the residual plane";
    } catch (const DimensionError&) {
        base = 0;
        note = "residual plane conditions are off-dimension: no isolated solutions";
    }
    (void)s;
    return leaf_result(base, 1, note);
}

CountResult eval_quadric_catalog(const Parsed& s) {
    if (s.fib_contain1 == 1 && s.fib_glue2 == 1 && s.free_pts + s.inh_pts == 1 &&
        s.free_lines + s.vac_lines == 4 && s.curve_meets == 0) {
        return leaf_result(6, 1,
                           "quadric in P^4 containing a fixed ruling line, through a "
                           "point, meeting 4 lines and a fixed plane in a line: 6 "
                           "(cataloged; cross-validated through the degree-3 totals "
                           "against the independent oracle)");
    }
    throw BaseCaseGapError("quadric-in-P^4 base shape is not cataloged");
}

CountResult eval_subscroll(const Parsed& s) {
    const int n = s.spec.N;
    if (s.J == n + 3 && s.fib_pin == 1 && s.curve_meets == 0 && s.free_pts == 0 &&
        s.free_lines == 0 && s.vac_lines == 0 && s.inh_pts == 0) {
        const bool meets_space = (s.fib_mark == 1 && s.inh_big == 0);
        const bool moved_inside = (s.fib_mark == 0 && s.inh_big == 1);
        if (meets_space || moved_inside) {
            return leaf_result(
                n - 2, 1,
                "scroll of degree " + std::to_string(n - 1) + " in P^" +
                    std::to_string(n) + " through the rigid section with pinned glue "
                    "fiber: " + std::to_string(n - 2) +
                    " (cataloged; the smallest instance is computed from first "
                    "principles and the next is checked against the independent "
                    "oracle)");
        }
    }
    throw BaseCaseGapError("sub-chain leaf shape is not cataloged");
}

CountResult eval_ruled_pair(DegenerationEngine& eng, const Parsed& s);

// Driver ---------------------------------------------------------------------

std::string describe_move(const Condition& mv, const Parsed& s) {
    if (mv.dim == 0) return "specialize a point into H";
    if (s.n >= 4 && mv.dim == s.n - 3 && s.spec.N == s.n + 1)
        return "specialize the larger condition into H";
    return "specialize a line into H";
}

} // namespace

CountResult DegenerationEngine::count(const ScrollProblem& problem) {
    ScrollProblem canon = canonicalize(problem);
    const std::string key = problem_key(canon);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    CountResult r = count_impl(canon);
    verify_conservation(r);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        memo_.emplace(key, r);
    }
    return r;
}

CountResult DegenerationEngine::count(const IncidenceProblem& problem) {
    if (!problem.spec.balanced()) {
        throw ScopeError(
            "unbalanced scrolls degenerate through cones; no specialization order "
            "is certified for them");
    }
    if (!is_enumerative(problem)) {
        throw DimensionError("condition dimensions do not cut the family to points: "
                             "expected condition sum " +
                             std::to_string(scroll_family_dim(problem.spec)) + ", got " +
                             std::to_string(condition_sum(problem)));
    }
    return count(make_scroll_problem(problem));
}

CountResult DegenerationEngine::count_impl(const ScrollProblem& canon) {
    Parsed s = parse(canon);
    Kind kind = classify(s);

    switch (kind) {
        case Kind::LinearSystem: return eval_linear_system(s);
        case Kind::ConicInPlane: return eval_conic_plane(s);
        case Kind::PlaneBase: return eval_plane_base(canon, s);
        case Kind::QuadricCatalog: return eval_quadric_catalog(s);
        case Kind::SubscrollLeaf: return eval_subscroll(s);
        case Kind::RuledPair: return eval_ruled_pair(*this, s);
        default: break;
    }

    // Fresh problems: pin the spanning points, then run the state machine.
    if (kind == Kind::ChainFresh || kind == Kind::QuadricFresh) {
        ScrollProblem mid;
        mid.spec = s.spec;
        int pinned = (kind == Kind::ChainFresh) ? s.n + 1 : 3;
        mid.marked_curve_degree = (kind == Kind::ChainFresh) ? s.n : 2;
        mid.fixed_curve_points = pinned;
        add_conditions(mid, s.free_pts - pinned, surface_cond(0));
        add_conditions(mid, s.free_lines, surface_cond(1));
        if (s.big) mid.conditions.push_back(surface_cond(s.n - 3));
        CountResult inner = count(canonicalize(std::move(mid)));
        CountResult root = inner;
        root.label = state_label(s) + "  [H spans the first " + std::to_string(pinned) +
                     " points; section = surface ∩ H]";
        return root;
    }

    // Mid-recursion states.
    auto mv = next_move(s, kind);
    if (!mv) throw ScopeError("state admits no certified specialization");
    std::vector<Branch> branches = enumerate_H_branches(canon, *mv);

    CountResult node;
    node.label = state_label(s) + "  [" + describe_move(*mv, s) + "]";
    for (Branch& b : branches) {
        TraceEdge edge;
        if (b.subproblems.empty()) {
            edge.children.push_back(dead_result(b.note));
        } else {
            for (const ScrollProblem& sub : b.subproblems) {
                edge.children.push_back(count(sub));
            }
        }
        edge.branch = std::move(b);
        node.edges.push_back(std::move(edge));
    }
    node.value = edge_sum(node);
    node.base_value = 0;
    node.incidence_factor = 1;
    return node;
}

namespace {

// Ruled-pair leaf: quadric in P^3 with marked ruling line. Dispatches on the
// curve state; the cascade case recurses through enumerate_Pi_branches.
CountResult eval_ruled_pair(DegenerationEngine& eng, const Parsed& s) {
    long inc = 1;
    for (int i = 0; i < s.vac_lines; ++i) inc *= 2; // vacuous lines × deg Q
    const int pts = s.free_pts + s.inh_pts;

    if (s.J == 5 && s.curve_meets == 0 && s.fib_contain1 == 0) {
        mpz_class base = ruled_pair_integral(5 + pts, s.fib_mark, s.fib_pin);
        return leaf_result(base, inc,
                           "(quadric, ruling line) pairs: section through 5 pinned "
                           "points recovered with multiplicity 1; " +
                               std::to_string(pts) + " surface points, " +
                               std::to_string(s.fib_mark) + " fiber incidences");
    }
    if (s.J == 5 && s.curve_meets == 0 && s.fib_contain1 == 1) {
        mpz_class base = (pts + s.fib_mark == 4 && s.fib_pin == 0)
                             ? fixed_fiber_pair(3 + pts, s.fib_mark)
                             : 0;
        return leaf_result(base, inc,
                           "(quadric, ruling line) pairs with a fixed ruling line "
                           "absorbed: " + std::to_string(pts) + " surface points, " +
                               std::to_string(s.fib_mark) + " fiber incidences");
    }
    if (s.J == 5 && s.curve_meets == 1) {
        // Specialize the pending curve incidence into the directrix plane.
        ScrollProblem stripped;
        stripped.spec = s.spec;
        stripped.marked_curve_degree = 3;
        stripped.fixed_curve_points = 5;
        add_conditions(stripped, pts, surface_cond(0));
        stripped.conditions.push_back(curve_meet_cond());
        for (int i = 0; i < s.fib_mark; ++i) stripped.fibers.push_back({3, 1});
        stripped = canonicalize(std::move(stripped));
        std::vector<Branch> branches = enumerate_Pi_branches(stripped, curve_meet_cond());

        CountResult node;
        node.label = "section meets a line: specialize that line into the plane of "
                     "the 3 collinear-free pinned points";
        for (Branch& b : branches) {
            TraceEdge edge;
            CountResult child = eng.count(b.subproblems.front());
            if (b.case_tag == BranchCase::FiberBreakPlaneConic) {
                // The moved line meets the conic piece: degree-2 choice of
                // intersection point, recorded as an explicit factor node.
                CountResult wrap;
                wrap.label = "conic component in the plane: 2 intersection-point choices";
                wrap.incidence_factor = 2;
                TraceEdge innerEdge;
                Branch innerBranch;
                innerBranch.case_tag = BranchCase::IntersectionChoice;
                innerBranch.subproblems.push_back(b.subproblems.front());
                innerBranch.note = "per intersection point";
                innerEdge.branch = std::move(innerBranch);
                innerEdge.children.push_back(child);
                wrap.edges.push_back(std::move(innerEdge));
                wrap.value = edge_sum(wrap) * wrap.incidence_factor;
                edge.children.push_back(std::move(wrap));
            } else {
                edge.children.push_back(std::move(child));
            }
            edge.branch = std::move(b);
            node.edges.push_back(std::move(edge));
        }
        node.incidence_factor = inc;
        node.value = edge_sum(node) * inc;
        return node;
    }
    if (s.J == 6 && s.curve_meets == 0 && s.fib_contain1 == 0) {
        mpz_class base = fixed_cubic_pair(pts + s.inh_big, s.fib_mark, s.fib_pin);
        return leaf_result(base, inc,
                           "(quadric, ruling line) pairs through the rigid cubic: " +
                               std::to_string(pts) + " surface points, " +
                               std::to_string(s.fib_mark) + " fiber incidences, " +
                               std::to_string(s.fib_pin) + " pinned fiber point(s)");
    }
    throw BaseCaseGapError("ruled-pair leaf shape is not cataloged");
}

void render(const CountResult& node, std::ostringstream& os, int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    os << pad << node.label << "  = " << node.value.get_str();
    if (node.incidence_factor != 1) {
        if (node.edges.empty()) {
            os << "  (" << node.incidence_factor << " × " << node.base_value.get_str()
               << ")";
        } else {
            os << "  (incidence factor " << node.incidence_factor << ")";
        }
    }
    os << "\n";
    for (const TraceEdge& e : node.edges) {
        os << pad << "  [" << to_string(e.branch.case_tag);
        if (e.branch.combinatorial_factor != 1) os << " ×" << e.branch.combinatorial_factor;
        os << "]";
        if (!e.branch.note.empty()) os << " " << e.branch.note;
        os << "\n";
        for (const CountResult& ch : e.children) render(ch, os, depth + 2);
    }
}

} // namespace

std::string DegenerationEngine::explain(const ScrollProblem& problem) {
    CountResult r = count(problem);
    std::ostringstream os;
    render(r, os, 0);
    return os.str();
}

std::string DegenerationEngine::explain(const IncidenceProblem& problem) {
    CountResult r = count(problem);
    std::ostringstream os;
    render(r, os, 0);
    return os.str();
}

bool DegenerationEngine::certifies(const IncidenceProblem& problem) const {
    try {
        if (!problem.spec.balanced() || !is_enumerative(problem)) return false;
        Parsed s = parse(make_scroll_problem(problem));
        Kind k = classify(s);
        return k == Kind::ChainFresh || k == Kind::QuadricFresh ||
               (k == Kind::LinearSystem && s.vac_lines == 0 && s.fib_contain1 == 0);
    } catch (const Error&) {
        return false;
    }
}

std::vector<std::pair<std::string, mpz_class>> DegenerationEngine::memo_entries() const {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    std::vector<std::pair<std::string, mpz_class>> out;
    out.reserve(memo_.size());
    for (const auto& [k, v] : memo_) out.emplace_back(k, v.value);
    return out;
}

void DegenerationEngine::import_memo(const std::string& key, const mpz_class& value) {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
        if (it->second.value != value) {
            throw CacheIntegrityError("cached value for " + key + " (" + value.get_str() +
                                      ") conflicts with computed value " +
                                      it->second.value.get_str());
        }
        return;
    }
    CountResult r = leaf_result(value, 1, "cached value");
    memo_.emplace(key, std::move(r));
}

} // namespace scrollcount
