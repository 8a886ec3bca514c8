#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "scrollcount/engine.hpp"

using namespace scrollcount;

namespace {

IncidenceProblem row(int N, int k, int l, std::vector<int> counts) {
    return IncidenceProblem::from_counts(N, k, l, counts);
}

// Quadric-layer leaf states, built through the public problem type.
ScrollProblem quadric_state(int J, int meets, int pts, int marks, int pins,
                            int contain1, int vac, bool with_curve) {
    ScrollProblem p;
    p.spec = ScrollSpec(3, 1, 1);
    if (with_curve) {
        p.marked_curve_degree = 3;
        p.fixed_curve_points = J;
    }
    for (int i = 0; i < pts; ++i)
        p.conditions.push_back({0, ConditionTarget::Surface, ConditionStage::Free});
    for (int i = 0; i < vac; ++i)
        p.conditions.push_back({1, ConditionTarget::Surface, ConditionStage::InH});
    for (int i = 0; i < meets; ++i)
        p.conditions.push_back({1, ConditionTarget::MarkedCurve, ConditionStage::InH});
    for (int i = 0; i < contain1; ++i) p.fibers.push_back({1, -1});
    for (int i = 0; i < marks; ++i) p.fibers.push_back({3, 1});
    for (int i = 0; i < pins; ++i) p.fibers.push_back({3, 0});
    return canonicalize(std::move(p));
}

int depth(const CountResult& node) {
    int d = 0;
    for (const TraceEdge& e : node.edges)
        for (const CountResult& ch : e.children) d = std::max(d, depth(ch));
    return d + 1;
}

// Collects edges of a node matching a case tag.
std::vector<const TraceEdge*> edges_of(const CountResult& node, BranchCase tag) {
    std::vector<const TraceEdge*> out;
    for (const TraceEdge& e : node.edges)
        if (e.branch.case_tag == tag) out.push_back(&e);
    return out;
}

mpz_class edge_value(const TraceEdge& e) {
    if (e.children.empty()) return 0;
    mpz_class v = e.branch.multiplicity;
    v *= e.branch.combinatorial_factor;
    for (const CountResult& ch : e.children) v *= ch.value;
    return v;
}

// The unique live SectionTransfer child, if any.
const CountResult* transfer_child(const CountResult& node) {
    for (const TraceEdge& e : node.edges)
        if (e.branch.case_tag == BranchCase::SectionTransfer && !e.branch.subproblems.empty())
            return &e.children.front();
    return nullptr;
}

} // namespace

TEST_CASE("nine points in P^4 yield two cubic scrolls") {
    DegenerationEngine eng;
    CountResult r = eng.count(row(4, 1, 2, {9, 0}));
    CHECK(r.value == 2);
    verify_conservation(r);

    // The two solutions come from exactly two break leaves, one per step
    // after the section is rigid, each contributing 1.
    const CountResult* p6 = transfer_child(r);
    REQUIRE(p6 != nullptr);
    auto breaks6 = edges_of(*p6, BranchCase::SubscrollBreak);
    mpz_class break6 = 0;
    for (auto* e : breaks6) break6 += edge_value(*e);
    CHECK(break6 == 1);

    const CountResult* p7 = transfer_child(*p6);
    REQUIRE(p7 != nullptr);
    auto breaks7 = edges_of(*p7, BranchCase::SubscrollBreak);
    mpz_class break7 = 0;
    for (auto* e : breaks7) break7 += edge_value(*e);
    CHECK(break7 == 1);
    CHECK(transfer_child(*p7) == nullptr); // the rigid section ends the chain
}

TEST_CASE("six points and six lines in P^4 yield 1140 cubic scrolls") {
    DegenerationEngine eng;
    CountResult r = eng.count(row(4, 1, 2, {6, 6}));
    CHECK(r.value == 1140);
    verify_conservation(r);

    // Walk: root (point move) -> line move I -> line move II -> line move III.
    const CountResult* stepI = transfer_child(r);
    REQUIRE(stepI != nullptr);
    CHECK(stepI->value == 1140);

    // Step I: the four live break terms sum to 340; the largest-distribution
    // edge is 5 choices x (2 intersection points x 4 base solutions) = 40.
    mpz_class sumI = 0;
    bool saw_5_2_4 = false;
    for (auto* e : edges_of(*stepI, BranchCase::SubscrollBreak)) {
        sumI += edge_value(*e);
        if (e->branch.combinatorial_factor == 5 && !e->children.empty()) {
            const CountResult& ch = e->children.front();
            if (ch.incidence_factor == 2 && ch.base_value == 4 && edge_value(*e) == 40)
                saw_5_2_4 = true;
        }
    }
    CHECK(sumI == 340);
    CHECK(saw_5_2_4);

    // Step II: distributions over the broken quadric sum to 500; the
    // plane-inside break contributes 10 x (1 x 6) = 60; the transfer edge
    // carries the 5 rigid cubics.
    const CountResult* stepII = transfer_child(*stepI);
    REQUIRE(stepII != nullptr);
    CHECK(stepII->value == 800);
    mpz_class sumII = 0;
    mpz_class planeInside = 0;
    for (auto* e : edges_of(*stepII, BranchCase::SubscrollBreak)) {
        if (e->branch.subproblems.size() == 2) {
            planeInside += edge_value(*e);
            CHECK(e->branch.combinatorial_factor == 10);
        } else {
            sumII += edge_value(*e);
        }
    }
    CHECK(sumII == 500);
    CHECK(planeInside == 60);

    const TraceEdge* transferII = nullptr;
    for (const TraceEdge& e : stepII->edges)
        if (e.branch.case_tag == BranchCase::SectionTransfer && !e.branch.subproblems.empty())
            transferII = &e;
    REQUIRE(transferII != nullptr);
    CHECK(transferII->branch.combinatorial_factor == 5);
    CHECK(transferII->children.front().value == 48);
    CHECK(edge_value(*transferII) == 240);

    // Step III: per-cubic value 48 = 12 + 24 + 12.
    const CountResult& stepIII = transferII->children.front();
    mpz_class sumIII = 0;
    for (auto* e : edges_of(stepIII, BranchCase::SubscrollBreak)) sumIII += edge_value(*e);
    CHECK(sumIII == 48);

    // Level arithmetic: 340 + 500 + 60 + 240 = 1140.
    CHECK(sumI + sumII + planeInside + mpz_class(240) == 1140);
}

TEST_CASE("three points and seven lines in P^4 yield 9 quadric scrolls") {
    DegenerationEngine eng;
    CountResult r = eng.count(row(4, 1, 1, {3, 7}));
    CHECK(r.value == 9);
    verify_conservation(r);

    // 2 (into H) + 2 (into H) + 2 (into H) + 3 (split) across the three moves.
    const CountResult* n1 = &r;
    std::vector<mpz_class> intoH;
    mpz_class split_total = 0;
    while (n1 != nullptr) {
        for (auto* e : edges_of(*n1, BranchCase::SurfaceIntoHyperplane))
            if (!e->branch.subproblems.empty()) intoH.push_back(edge_value(*e));
        for (auto* e : edges_of(*n1, BranchCase::PerfectSplit)) split_total += edge_value(*e);
        n1 = transfer_child(*n1);
    }
    REQUIRE(intoH.size() == 3);
    CHECK(intoH[0] == 2);
    CHECK(intoH[1] == 2);
    CHECK(intoH[2] == 2);
    CHECK(split_total == 3);
}

TEST_CASE("four points and five lines in P^4 yield 1 quadric scroll") {
    DegenerationEngine eng;
    CountResult r = eng.count(row(4, 1, 1, {4, 5}));
    CHECK(r.value == 1);
    verify_conservation(r);
}

TEST_CASE("nine points on a quadric in P^3") {
    DegenerationEngine eng;
    CHECK(eng.count(row(3, 1, 1, {9, 0})).value == 1);
}

TEST_CASE("chain of larger conditions: 2, 6, 12, 20") {
    DegenerationEngine eng;
    CHECK(eng.count(row(4, 1, 2, {9, 0})).value == 2);
    CHECK(eng.count(row(5, 2, 2, {9, 1})).value == 6);
    CHECK(eng.count(row(6, 2, 3, {10, 0, 1})).value == 12);
    CHECK(eng.count(row(7, 3, 3, {11, 0, 0, 1})).value == 20);
}

TEST_CASE("chain recursion reuses the lower row through the memo") {
    DegenerationEngine eng;
    CHECK(eng.count(row(5, 2, 2, {9, 1})).value == 6);
    // Counting the degree-4 row forces the degree-3 row as a subproblem.
    std::string a1_key = problem_key(make_scroll_problem(row(4, 1, 2, {9, 0})));
    bool found = false;
    for (const auto& [k, v] : eng.memo_entries()) {
        if (k == a1_key) {
            found = true;
            CHECK(v == 2);
        }
    }
    CHECK(found);
}

TEST_CASE("ruled-pair base integrals") {
    DegenerationEngine eng;
    // Point powers against fiber incidences: values 4, 8, 6, 2 as the line
    // count on the quadric drops from 4 points' worth to 1.
    CHECK(eng.count(quadric_state(5, 0, 4, 1, 0, 0, 0, true)).value == 4);
    CHECK(eng.count(quadric_state(5, 0, 3, 2, 0, 0, 0, true)).value == 8);
    CHECK(eng.count(quadric_state(5, 0, 2, 3, 0, 0, 0, true)).value == 6);
    CHECK(eng.count(quadric_state(5, 0, 1, 4, 0, 0, 0, true)).value == 2);
    // Degenerate ends vanish.
    CHECK(eng.count(quadric_state(5, 0, 5, 0, 0, 0, 0, true)).value == 0);
    CHECK(eng.count(quadric_state(5, 0, 0, 5, 0, 0, 0, true)).value == 0);
    // A pinned ruling line instead of incidences: 3 surface points, one pin.
    CHECK(eng.count(quadric_state(5, 0, 3, 0, 1, 0, 0, true)).value == 2);
    // Pure Schubert cross-check: four incidences on the line factor alone
    // reproduce ∫ σ1^4 = 2 on the Grassmannian of lines.
    CHECK(eng.count(quadric_state(5, 0, 1, 4, 0, 0, 0, true)).value == 2);
}

TEST_CASE("fixed-ruling-line pair table") {
    DegenerationEngine eng;
    CHECK(eng.count(quadric_state(5, 0, 0, 4, 0, 1, 0, true)).value == 2);
    CHECK(eng.count(quadric_state(5, 0, 1, 3, 0, 1, 0, true)).value == 4);
    CHECK(eng.count(quadric_state(5, 0, 2, 2, 0, 1, 0, true)).value == 4);
    CHECK(eng.count(quadric_state(5, 0, 3, 1, 0, 1, 0, true)).value == 2);
    CHECK(eng.count(quadric_state(5, 0, 4, 0, 0, 1, 0, true)).value == 0);
}

TEST_CASE("rigid-cubic pair table") {
    DegenerationEngine eng;
    CHECK(eng.count(quadric_state(6, 0, 0, 3, 0, 0, 0, true)).value == 6);
    CHECK(eng.count(quadric_state(6, 0, 1, 2, 0, 0, 0, true)).value == 4);
    CHECK(eng.count(quadric_state(6, 0, 2, 1, 0, 0, 0, true)).value == 2);
    CHECK(eng.count(quadric_state(6, 0, 3, 0, 0, 0, 0, true)).value == 0);
    // Pinned glue fiber: both cataloged shapes count 1.
    CHECK(eng.count(quadric_state(6, 0, 1, 0, 1, 0, 0, true)).value == 1);
    CHECK(eng.count(quadric_state(6, 0, 0, 1, 1, 0, 0, true)).value == 1);
}

TEST_CASE("sub-chain glue leaves match the cataloged constant") {
    DegenerationEngine eng;
    // Degree-3 scroll in P^4 through a rigid quartic section, glue fiber
    // pinned and meeting a general plane: cataloged value n-2 = 2.
    ScrollProblem b;
    b.spec = ScrollSpec(4, 1, 2);
    b.marked_curve_degree = 4;
    b.fixed_curve_points = 7;
    b.fibers.push_back({4, 0});
    b.fibers.push_back({4, 2});
    CHECK(eng.count(canonicalize(b)).value == 2);

    ScrollProblem c;
    c.spec = ScrollSpec(4, 1, 2);
    c.marked_curve_degree = 4;
    c.fixed_curve_points = 7;
    c.fibers.push_back({4, 0});
    c.conditions.push_back({1, ConditionTarget::Surface, ConditionStage::InH});
    CHECK(eng.count(canonicalize(c)).value == 2);
}

TEST_CASE("plane base cases via Schubert calculus") {
    auto plane_problem = [](int pts, int lines, bool glue) {
        ScrollProblem p;
        p.spec = ScrollSpec(4, 0, 1);
        for (int i = 0; i < pts; ++i)
            p.conditions.push_back({0, ConditionTarget::Surface, ConditionStage::Free});
        for (int i = 0; i < lines; ++i)
            p.conditions.push_back({1, ConditionTarget::Surface, ConditionStage::Free});
        if (glue) p.fibers.push_back({2, -1});
        return canonicalize(std::move(p));
    };
    CHECK(resolve_plane_base(plane_problem(0, 4, true)) == 3);
    CHECK(resolve_plane_base(plane_problem(1, 2, true)) == 1);
    CHECK(resolve_plane_base(plane_problem(2, 0, true)) == 0);
    CHECK(resolve_plane_base(plane_problem(3, 0, false)) == 1);
    CHECK_THROWS_AS(resolve_plane_base(plane_problem(0, 3, true)), DimensionError);
}

TEST_CASE("incidence degree factors") {
    ScrollProblem quad = quadric_state(0, 0, 9, 0, 0, 0, 0, false);
    CHECK(incidence_factor(quad, {1, ConditionTarget::Surface, ConditionStage::InH}) == 2);

    ScrollProblem plane;
    plane.spec = ScrollSpec(4, 0, 1);
    CHECK(incidence_factor(plane, {2, ConditionTarget::Surface, ConditionStage::InH}) == 1);

    ScrollProblem withCurve = quadric_state(5, 0, 0, 0, 0, 0, 0, true);
    CHECK(incidence_factor(withCurve, {2, ConditionTarget::MarkedCurve, ConditionStage::InH}) == 3);

    CHECK_THROWS_AS(
        incidence_factor(quad, {0, ConditionTarget::Surface, ConditionStage::Free}),
        InvalidConditionError);
}

TEST_CASE("canonicalization makes the count order-independent") {
    ScrollProblem a = make_scroll_problem(row(4, 1, 2, {6, 6}));
    ScrollProblem b = a;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(b.conditions.begin(), b.conditions.end(), rng);
        CHECK(problem_key(b) == problem_key(a));
    }
    CHECK(canonicalize(canonicalize(a)) == canonicalize(a));
    DegenerationEngine eng;
    CHECK(eng.count(canonicalize(b)).value == 1140);
}

TEST_CASE("certified specialization order") {
    // Fresh problems move a point first.
    ScrollProblem a2 = make_scroll_problem(row(4, 1, 2, {6, 6}));
    CHECK(certify_nondegeneracy(a2, {0, ConditionTarget::Surface, ConditionStage::Free}));
    CHECK_FALSE(certify_nondegeneracy(a2, {1, ConditionTarget::Surface, ConditionStage::Free}));

    // Once only the reserved point is free, lines move and the point is held.
    ScrollProblem stepI;
    stepI.spec = ScrollSpec(4, 1, 2);
    stepI.marked_curve_degree = 3;
    stepI.fixed_curve_points = 5;
    for (int i = 0; i < 1; ++i)
        stepI.conditions.push_back({0, ConditionTarget::Surface, ConditionStage::Free});
    for (int i = 0; i < 6; ++i)
        stepI.conditions.push_back({1, ConditionTarget::Surface, ConditionStage::Free});
    stepI = canonicalize(std::move(stepI));
    CHECK(certify_nondegeneracy(stepI, {1, ConditionTarget::Surface, ConditionStage::Free}));
    CHECK_FALSE(certify_nondegeneracy(stepI, {0, ConditionTarget::Surface, ConditionStage::Free}));

    // Branch enumeration refuses an uncertified move.
    CHECK_THROWS_AS(
        enumerate_H_branches(stepI, {0, ConditionTarget::Surface, ConditionStage::Free}),
        InvalidConditionError);
    CHECK(enumerate_H_branches(stepI, {1, ConditionTarget::Surface, ConditionStage::Free})
              .size() >= 3);
}

TEST_CASE("plane specialization of the pending curve incidence") {
    ScrollProblem cascade = quadric_state(5, 1, 0, 4, 0, 0, 0, true);
    std::vector<Branch> bs =
        enumerate_Pi_branches(cascade, {1, ConditionTarget::MarkedCurve, ConditionStage::InH});
    REQUIRE(bs.size() == 2);
    CHECK(bs[0].case_tag == BranchCase::FiberBreakPlaneLine);
    CHECK(bs[0].combinatorial_factor == 3);
    CHECK(bs[1].case_tag == BranchCase::FiberBreakPlaneConic);
    CHECK(bs[1].combinatorial_factor == 1);

    // Full cascade value: (3 + 1 x 2) x table(marks = 4) = 5 x 2 = 10.
    DegenerationEngine eng;
    CHECK(eng.count(cascade).value == 10);
}

TEST_CASE("refusals: uncertified shapes throw, never return a number") {
    DegenerationEngine eng;
    CHECK_THROWS_AS(eng.count(row(4, 1, 2, {8, 2})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(4, 1, 2, {7, 4})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(4, 1, 2, {5, 8})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(4, 1, 1, {2, 9})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(4, 1, 1, {1, 11})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(5, 1, 1, {3, 0, 8})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(5, 1, 2, {4, 5, 1})), ScopeError);
    CHECK_THROWS_AS(eng.count(row(5, 1, 2, {4, 4, 3})), ScopeError);
    // Unbalanced: cone degenerations, out of scope by design.
    CHECK_THROWS_AS(eng.count(row(4, 0, 2, {4, 4})), ScopeError);
    // Wrong condition dimension: a dimension error, not a scope error.
    CHECK_THROWS_AS(eng.count(row(4, 1, 2, {6, 5})), DimensionError);

    CHECK(eng.certifies(row(4, 1, 2, {6, 6})));
    CHECK(eng.certifies(row(4, 1, 1, {3, 7})));
    CHECK(eng.certifies(row(5, 2, 2, {9, 1})));
    CHECK_FALSE(eng.certifies(row(4, 1, 2, {8, 2})));
    CHECK_FALSE(eng.certifies(row(4, 0, 2, {4, 4})));
}

TEST_CASE("termination: trace depth is bounded by the condition count") {
    DegenerationEngine eng;
    CountResult r = eng.count(row(4, 1, 2, {6, 6}));
    CHECK(depth(r) <= 15);
    CountResult c6 = eng.count(row(7, 3, 3, {11, 0, 0, 1}));
    CHECK(depth(c6) <= 20);
}

TEST_CASE("explain annotates dead partitions") {
    DegenerationEngine eng;
    std::string text = eng.explain(row(4, 1, 2, {9, 0}));
    CHECK(text.find("= 2") != std::string::npos);
    CHECK(text.find("over-constrained partition") != std::string::npos);
    CHECK(text.find("cone") != std::string::npos);
}

TEST_CASE("memo import guards integrity") {
    DegenerationEngine eng;
    std::string key = problem_key(make_scroll_problem(row(4, 1, 2, {9, 0})));
    eng.import_memo(key, 2);
    CHECK(eng.count(row(4, 1, 2, {9, 0})).value == 2);
    CHECK_THROWS_AS(eng.import_memo(key, 3), CacheIntegrityError);

    DegenerationEngine eng2;
    CHECK(eng2.count(row(4, 1, 2, {9, 0})).value == 2);
    CHECK_THROWS_AS(eng2.import_memo(key, 5), CacheIntegrityError);
}
