#include "scrollcount/dimensions.hpp"

#include <algorithm>
#include <numeric>

namespace scrollcount {

int scroll_family_dim(const ScrollSpec& spec) {
    return (spec.k + spec.l + 2) * spec.N + 2 * spec.k - 4 - spec.delta();
}

int section_series_dim(const ScrollSpec& spec, int m) {
    if (m < 0) throw InvalidConditionError("section series offset must be non-negative");
    return std::max(spec.k - spec.l + 2 * m + 1, m);
}

IncidenceProblem::IncidenceProblem(ScrollSpec s, std::vector<int> dims)
    : spec(s), cond_dims(std::move(dims)) {
    for (int a : cond_dims) {
        if (a < 0 || a > spec.N - 2)
            throw InvalidConditionError("condition dimension " + std::to_string(a) +
                                        " outside [0, N-2] for N = " + std::to_string(spec.N));
    }
    std::sort(cond_dims.begin(), cond_dims.end());
}

IncidenceProblem IncidenceProblem::from_counts(int N, int k, int l,
                                               const std::vector<int>& a_counts) {
    std::vector<int> dims;
    for (size_t j = 0; j < a_counts.size(); ++j) {
        if (a_counts[j] < 0) throw InvalidConditionError("negative condition count");
        dims.insert(dims.end(), static_cast<size_t>(a_counts[j]), static_cast<int>(j));
    }
    return IncidenceProblem(ScrollSpec(N, k, l), std::move(dims));
}

std::vector<int> IncidenceProblem::to_counts() const {
    std::vector<int> counts;
    for (int a : cond_dims) {
        if (static_cast<size_t>(a) >= counts.size()) counts.resize(static_cast<size_t>(a) + 1, 0);
        ++counts[static_cast<size_t>(a)];
    }
    return counts;
}

int IncidenceProblem::num_points() const {
    return static_cast<int>(std::count(cond_dims.begin(), cond_dims.end(), 0));
}

int condition_sum(const IncidenceProblem& problem) {
    int sum = 0;
    for (int a : problem.cond_dims) sum += problem.spec.N - 2 - a;
    return sum;
}

bool is_enumerative(const IncidenceProblem& problem) {
    return condition_sum(problem) == scroll_family_dim(problem.spec);
}

bool kontsevich_dimension_check(int N, int d, const std::vector<Partition>& classes) {
    int total = 0;
    for (const auto& p : classes) total += p.weight();
    const int n = static_cast<int>(classes.size());
    return total == (2 * N - 2) + d * (N + 1) + n - 3;
}

namespace {

int sum_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

void require(bool ok, const std::string& what) {
    if (!ok) throw AuditError("building block configuration inconsistent: " + what);
}

} // namespace

int building_block_dim(const BuildingBlockSpec& bbs) {
    const ScrollSpec& s = bbs.spec;
    const int k = s.k, l = s.l, N = s.N;
    const int m = static_cast<int>(bbs.contact_orders.size());
    for (int mi : bbs.contact_orders) require(mi >= 1, "contact orders must be >= 1");
    for (int ni : bbs.tangency_orders) require(ni >= 1, "tangency orders must be >= 1");
    require(bbs.n >= 0, "negative fiber count");

    const bool uses_directrix = bbs.configuration == CurveConfig::BothDirectrix ||
                                bbs.configuration == CurveConfig::DirectrixAndH;
    if (s.no_directrix)
        require(!uses_directrix, "a perfectly balanced scroll has no directrix");

    const int sum_m = sum_of(bbs.contact_orders);
    const int sum_n = sum_of(bbs.tangency_orders);

    // Configurations with two geometrically distinct marked curves carry the
    // tangency bookkeeping; the list is indexed over the n extra common
    // fibers together with the m hyperplane-contact fibers.
    const bool two_curves = bbs.configuration == CurveConfig::MixedOneFixed ||
                            bbs.configuration == CurveConfig::Distinct ||
                            bbs.configuration == CurveConfig::DirectrixAndH ||
                            bbs.configuration == CurveConfig::BothInH;
    if (bbs.configuration == CurveConfig::MixedOneFixed ||
        bbs.configuration == CurveConfig::Distinct ||
        bbs.configuration == CurveConfig::DirectrixAndH) {
        require(static_cast<int>(bbs.tangency_orders.size()) == bbs.n + m,
                "tangency list must have one entry per common fiber (n + m entries)");
    } else {
        require(bbs.tangency_orders.empty() && bbs.n == 0,
                "coincident curves carry no tangency data");
    }
    if (bbs.configuration == CurveConfig::Distinct)
        require(sum_n <= bbs.d + bbs.e - k - l,
                "tangency orders exceed what two distinct sections admit");
    (void)two_curves;

    int alpha = 0;
    if (sum_m > k) {
        // The directrix is forced into the hyperplane and the contact orders
        // fill the whole fiber-degree budget.
        require(sum_m == l, "hyperplane contact orders must sum to l when they exceed k");
        switch (bbs.configuration) {
            case CurveConfig::BothInH:
            case CurveConfig::BothDirectrix:
            case CurveConfig::DirectrixAndH:
                alpha = 0; // both curves lie in the hyperplane
                break;
            case CurveConfig::Coincident:
                alpha = 2 * bbs.d - k - l + 1;
                break;
            case CurveConfig::MixedOneFixed:
                alpha = 2 * bbs.d - k - l + 1 + bbs.n - sum_n;
                break;
            case CurveConfig::Distinct:
                alpha = 2 * bbs.d + 2 * bbs.e - 2 * k - 2 * l + 2 + bbs.n - sum_n;
                break;
        }
        return N * (k + l + 2) + k - l - 5 - s.delta() + m + alpha;
    }

    switch (bbs.configuration) {
        case CurveConfig::BothInH:
        case CurveConfig::BothDirectrix:
            alpha = 0;
            break;
        case CurveConfig::DirectrixAndH:
            alpha = bbs.n - sum_n;
            break;
        case CurveConfig::Coincident:
            alpha = 2 * bbs.d - k - l + 1;
            break;
        case CurveConfig::MixedOneFixed:
            alpha = 2 * bbs.d - k - l + 1 + bbs.n - sum_n;
            break;
        case CurveConfig::Distinct:
            alpha = 2 * bbs.d + 2 * bbs.e - 2 * k - 2 * l + 2 + bbs.n - sum_n;
            break;
    }
    return N * (k + l + 2) + 2 * k - 4 - s.delta() - 2 * sum_m + m + alpha;
}

int gluing_codim(const GluingSpec& spec, int N) {
    return (2 * N - 2) * (spec.v - 1) + spec.e1 + 2 * spec.e2;
}

ProblemScope scope_check(const IncidenceProblem& problem, const OrderCertifier& certifier) {
    const ScrollSpec& s = problem.spec;
    if (!s.balanced()) return ProblemScope::OutOfScope;

    const auto& dims = problem.cond_dims; // sorted increasing
    const int deg = s.degree();
    const int bound = s.N - deg - 1;
    bool literal = is_enumerative(problem);
    // All conditions strictly below codimension 2's complement: a_i < N-2.
    for (int a : dims)
        if (a >= s.N - 2) literal = false;
    // Largest condition within the reach of the hyperplane-section budget.
    if (literal && !dims.empty() && dims.back() > bound) literal = false;
    // At least deg+1 point conditions lead.
    if (literal) {
        if (static_cast<int>(dims.size()) < deg + 1) {
            literal = false;
        } else {
            for (int i = 0; i < deg + 1; ++i)
                if (dims[static_cast<size_t>(i)] != 0) literal = false;
        }
    }
    // The following stretch of conditions stays within the same bound.
    if (literal) {
        const int a_last = dims.back();
        for (int j = 0; j <= a_last + 1; ++j) {
            const size_t idx = static_cast<size_t>(deg + 1 + j); // 0-based a_{k+l+2+j}
            if (idx < dims.size() && dims[idx] > bound) literal = false;
        }
    }
    if (literal) return ProblemScope::InScope;
    if (certifier && certifier(problem)) return ProblemScope::OrderVariantScope;
    return ProblemScope::OutOfScope;
}

} // namespace scrollcount
