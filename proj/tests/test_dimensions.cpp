#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scrollcount/dimensions.hpp"
#include "scrollcount/schubert.hpp"

using namespace scrollcount;

namespace {

struct TableRow {
    int N, k, l;
    std::vector<int> counts;
    long expected; // published characteristic number (engine/oracle targets)
    bool balanced;
};

// The thirteen balanced rows plus the three cone rows of the published table.
const std::vector<TableRow> kTable = {
    {4, 1, 1, {4, 5}, 1, true},      {4, 1, 1, {3, 7}, 9, true},
    {4, 1, 1, {2, 9}, 64, true},     {4, 1, 1, {1, 11}, 430, true},
    {5, 1, 1, {3, 0, 8}, 48, true},  {4, 1, 2, {9, 0}, 2, true},
    {4, 1, 2, {8, 2}, 17, true},     {4, 1, 2, {7, 4}, 138, true},
    {4, 1, 2, {6, 6}, 1140, true},   {4, 1, 2, {5, 8}, 9770, true},
    {5, 1, 2, {4, 5, 1}, 58, true},  {5, 1, 2, {4, 4, 3}, 423, true},
    {5, 2, 2, {9, 1}, 6, true},      {4, 0, 2, {4, 4}, 4, false},
    {4, 0, 2, {3, 6}, 30, false},    {4, 0, 2, {2, 8}, 190, false},
};

OrderCertifier mock_certifier() {
    return [](const IncidenceProblem& p) {
        return p.spec.balanced() && is_enumerative(p) &&
               p.num_points() >= p.spec.degree() + 1;
    };
}

} // namespace

TEST_CASE("scroll family dimensions") {
    CHECK(scroll_family_dim(ScrollSpec(4, 1, 2)) == 18);
    CHECK(scroll_family_dim(ScrollSpec(4, 1, 1)) == 13);
    CHECK(scroll_family_dim(ScrollSpec(5, 2, 2)) == 29);
    CHECK(scroll_family_dim(ScrollSpec(5, 1, 1)) == 17);
}

TEST_CASE("section series dimensions") {
    CHECK(section_series_dim(ScrollSpec(4, 1, 2), 2) == 4);
    CHECK(section_series_dim(ScrollSpec(4, 0, 3), 0) == 0);
    CHECK(section_series_dim(ScrollSpec(5, 1, 3), 1) == 1);
    // Hyperplane series of S_{k,l} has dimension k+l+1.
    for (int k = 0; k <= 3; ++k)
        for (int l = std::max(k, 1); l <= 4; ++l)
            CHECK(section_series_dim(ScrollSpec(k + l + 1, k, l), l) == k + l + 1);
}

TEST_CASE("condition sums and enumerativity") {
    auto p66 = IncidenceProblem::from_counts(4, 1, 2, {6, 6});
    CHECK(condition_sum(p66) == 18);
    CHECK(is_enumerative(p66));

    auto p65 = IncidenceProblem::from_counts(4, 1, 2, {6, 5});
    CHECK(condition_sum(p65) == 17);
    CHECK_FALSE(is_enumerative(p65));

    auto p451 = IncidenceProblem::from_counts(5, 1, 2, {4, 5, 1});
    CHECK(condition_sum(p451) == 23);
    CHECK(is_enumerative(p451));

    CHECK_THROWS_AS(IncidenceProblem(ScrollSpec(4, 1, 1), {3}), InvalidConditionError);
}

TEST_CASE("every table row is dimensionally self-consistent") {
    for (const auto& row : kTable) {
        auto p = IncidenceProblem::from_counts(row.N, row.k, row.l, row.counts);
        CAPTURE(row.N);
        CAPTURE(row.counts);
        CHECK(is_enumerative(p));
        CHECK(p.spec.balanced() == row.balanced);
    }
}

TEST_CASE("gromov-witten grading check") {
    // 12 + 10 = 6 + 10 + 9 - 3.
    std::vector<Partition> cls(4, Partition{3});
    cls.insert(cls.end(), 5, Partition{2});
    CHECK(kontsevich_dimension_check(4, 2, cls));

    std::vector<Partition> bad(8, Partition{3});
    CHECK_FALSE(kontsevich_dimension_check(4, 3, bad));
}

TEST_CASE("balanced rows translate to grading-exact queries") {
    for (const auto& row : kTable) {
        if (!row.balanced) continue;
        std::vector<Partition> classes;
        for (size_t j = 0; j < row.counts.size(); ++j)
            for (int c = 0; c < row.counts[j]; ++c)
                classes.push_back(
                    special_class_for_incidence(row.N, static_cast<int>(j)).lambda);
        CHECK(kontsevich_dimension_check(row.N, row.k + row.l, classes));
    }
}

TEST_CASE("building block dimensions") {
    // No contact fibers, both curves on the directrix: the plain family.
    BuildingBlockSpec plain;
    plain.spec = ScrollSpec(4, 1, 2);
    plain.configuration = CurveConfig::BothDirectrix;
    CHECK(building_block_dim(plain) == scroll_family_dim(plain.spec));

    // Full-contact fiber (m=1, m_1=l) with both curves in the hyperplane.
    BuildingBlockSpec contact;
    contact.spec = ScrollSpec(4, 1, 2);
    contact.contact_orders = {2};
    contact.configuration = CurveConfig::BothInH;
    CHECK(building_block_dim(contact) == 4 * 5 + 1 - 2 - 4 - 0);

    // Coincident non-directrix sections on a perfectly balanced scroll.
    BuildingBlockSpec coin;
    coin.spec = ScrollSpec(5, 2, 2);
    coin.contact_orders = {2};
    coin.d = coin.e = 2;
    coin.configuration = CurveConfig::Coincident;
    CHECK(building_block_dim(coin) == 5 * 6 + 4 - 4 - 1 - 4 + 1 + 1);

    // Marked hyperplane sections add exactly the section-series dimension.
    for (int k = 0; k <= 2; ++k) {
        for (int l = std::max(k, 1); l <= 3; ++l) {
            BuildingBlockSpec hs;
            hs.spec = ScrollSpec(k + l + 2, k, l);
            hs.d = hs.e = k + l;
            hs.configuration = CurveConfig::Coincident;
            CHECK(building_block_dim(hs) ==
                  scroll_family_dim(hs.spec) + section_series_dim(hs.spec, hs.spec.l));
        }
    }
}

TEST_CASE("building block audit errors") {
    BuildingBlockSpec bad;
    bad.spec = ScrollSpec(5, 2, 2);
    bad.configuration = CurveConfig::BothDirectrix;
    CHECK_THROWS_AS(building_block_dim(bad), AuditError); // no directrix when k = l

    BuildingBlockSpec wrong_contact;
    wrong_contact.spec = ScrollSpec(4, 1, 2);
    wrong_contact.contact_orders = {2, 1}; // sum 3 > k but != l
    wrong_contact.configuration = CurveConfig::BothInH;
    CHECK_THROWS_AS(building_block_dim(wrong_contact), AuditError);

    BuildingBlockSpec wrong_tangency;
    wrong_tangency.spec = ScrollSpec(4, 1, 2);
    wrong_tangency.configuration = CurveConfig::Distinct;
    wrong_tangency.d = 3;
    wrong_tangency.e = 3;
    wrong_tangency.n = 2;
    wrong_tangency.tangency_orders = {1}; // needs n + m = 2 entries
    CHECK_THROWS_AS(building_block_dim(wrong_tangency), AuditError);
}

TEST_CASE("gluing codimension") {
    CHECK(gluing_codim(GluingSpec(1, 0, 0), 4) == 0);
    CHECK(gluing_codim(GluingSpec(2, 0, 1), 4) == 8);
    CHECK(gluing_codim(GluingSpec(3, 1, 1), 5) == 19);
    CHECK_THROWS_AS(GluingSpec(2, 1, 1), InvalidConditionError);
}

TEST_CASE("scope classification") {
    auto cert = mock_certifier();
    auto scope = [&](int N, int k, int l, std::vector<int> counts) {
        return scope_check(IncidenceProblem::from_counts(N, k, l, counts), cert);
    };

    CHECK(scope(4, 1, 2, {9, 0}) == ProblemScope::InScope);
    CHECK(scope(4, 1, 1, {4, 5}) == ProblemScope::InScope);
    CHECK(scope(4, 1, 1, {3, 7}) == ProblemScope::InScope);
    CHECK(scope(5, 1, 1, {3, 0, 8}) == ProblemScope::InScope);

    // Too few leading points: even the order-variant route is refused.
    CHECK(scope(4, 1, 1, {2, 9}) == ProblemScope::OutOfScope);
    CHECK(scope(4, 1, 1, {1, 11}) == ProblemScope::OutOfScope);

    // Conditions exceed the hyperplane-section bound, but a certified order exists.
    CHECK(scope(4, 1, 2, {8, 2}) == ProblemScope::OrderVariantScope);
    CHECK(scope(4, 1, 2, {6, 6}) == ProblemScope::OrderVariantScope);
    CHECK(scope(5, 2, 2, {9, 1}) == ProblemScope::OrderVariantScope);
    CHECK(scope(5, 1, 2, {4, 5, 1}) == ProblemScope::OrderVariantScope);

    // Without a certifier those same rows are refused rather than guessed.
    CHECK(scope_check(IncidenceProblem::from_counts(4, 1, 2, {6, 6})) ==
          ProblemScope::OutOfScope);

    // Unbalanced bidegrees are always out of scope.
    CHECK(scope(4, 0, 2, {4, 4}) == ProblemScope::OutOfScope);
}
