#include "scrollcount/schubert.hpp"

#include <functional>

namespace scrollcount {

std::vector<Partition> all_partitions_in_box(int rows, int cols) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int row, int maxpart) {
        out.emplace_back(cur);
        if (row >= rows) return;
        for (int p = maxpart; p >= 1; --p) {
            cur.push_back(p);
            rec(row + 1, p);
            cur.pop_back();
        }
    };
    rec(0, cols);
    return out;
}

std::vector<Partition> basis(const GrassmannianId& space) {
    return all_partitions_in_box(space.box_rows(), space.box_cols());
}

Partition point_class(const GrassmannianId& space) {
    return Partition(std::vector<int>(static_cast<size_t>(space.box_rows()), space.box_cols()));
}

CycleSum pieri_product(int a, const Partition& lambda, const GrassmannianId& space) {
    if (a < 0 || !space.contains(lambda))
        throw InvalidConditionError("pieri_product: invalid inputs");
    CycleSum out(space);
    const int rows = space.box_rows();
    const int cols = space.box_cols();
    // Build μ row by row: λ_i ≤ μ_i ≤ min(prev row's λ, i.e. λ_{i−1}, cols), so
    // that μ/λ is a horizontal strip, distributing a boxes in total.
    std::vector<int> mu;
    std::function<void(int, int)> rec = [&](int row, int remaining) {
        if (row > rows) {
            if (remaining == 0) out.add(Partition(mu), 1);
            return;
        }
        const int lo = lambda.part(row);
        const int hi_strip = (row == 1) ? cols : lambda.part(row - 1);
        const int hi = std::min({cols, hi_strip, lo + remaining});
        // Quick prune: the rows below can absorb at most what their strip
        // bounds allow; cheaper to just recurse, boxes are tiny.
        for (int v = lo; v <= hi; ++v) {
            mu.push_back(v);
            rec(row + 1, remaining - (v - lo));
            mu.pop_back();
        }
    };
    rec(1, a);
    return out;
}

namespace {

// Iterated Pieri: multiply σ_λ by h_{a_1} ··· h_{a_r} inside the box.
CycleSum apply_pieri_word(const Partition& lambda, const std::vector<int>& word,
                          const GrassmannianId& space) {
    CycleSum acc(space);
    acc.add(lambda, 1);
    for (int a : word) {
        if (a == 0) continue;
        CycleSum next(space);
        for (const auto& [p, c] : acc.terms()) {
            CycleSum step = pieri_product(a, p, space);
            step *= c;
            next += step;
        }
        acc = std::move(next);
        if (acc.is_zero()) break;
    }
    return acc;
}

} // namespace

CycleSum product(const Partition& lambda, const Partition& mu, const GrassmannianId& space) {
    if (!space.contains(lambda) || !space.contains(mu))
        throw InvalidConditionError("product: class outside the box of " + space.to_string());
    CycleSum out(space);
    const int r = mu.rows();
    if (r == 0) {
        out.add(lambda, 1);
        return out;
    }
    const int cols = space.box_cols();
    // Expand det(h_{μ_i + j − i}) over permutations, depth-first by row with
    // a used-column mask, skipping entries that vanish (index < 0 or, in the
    // quotient by the box, index > cols).
    std::vector<int> word(static_cast<size_t>(r));
    std::function<void(int, unsigned, int)> rec = [&](int row, unsigned used, int sign) {
        if (row == r) {
            // Count inversions implicitly via `sign` accumulated per choice.
            CycleSum term = apply_pieri_word(lambda, word, space);
            term *= sign;
            out += term;
            return;
        }
        for (int col = 0; col < r; ++col) {
            if (used & (1u << col)) continue;
            const int e = mu.part(row + 1) + col - row;
            if (e < 0 || e > cols) continue;
            // Parity of the permutation: count already-used columns to the
            // right of this one; each contributes an inversion.
            int inv = 0;
            for (int c2 = col + 1; c2 < r; ++c2)
                if (used & (1u << c2)) ++inv;
            word[static_cast<size_t>(row)] = e;
            rec(row + 1, used | (1u << col), (inv % 2 == 0) ? sign : -sign);
        }
    };
    rec(0, 0u, 1);
    return out;
}

CycleSum product(const CycleSum& sum, const Partition& mu) {
    CycleSum out(sum.space());
    for (const auto& [p, c] : sum.terms()) {
        CycleSum term = product(p, mu, sum.space());
        term *= c;
        out += term;
    }
    return out;
}

mpz_class intersection_number(const std::vector<Partition>& classes,
                              const GrassmannianId& space) {
    int total = 0;
    for (const auto& p : classes) {
        if (!space.contains(p))
            throw InvalidConditionError("intersection_number: class outside box");
        total += p.weight();
    }
    if (total != space.dim())
        throw DimensionError("intersection_number: codimensions sum to " + std::to_string(total) +
                             ", expected " + std::to_string(space.dim()));
    CycleSum acc(space);
    acc.add(Partition{}, 1);
    for (const auto& p : classes) {
        acc = product(acc, p);
        if (acc.is_zero()) return 0;
    }
    return acc.coefficient(point_class(space));
}

Partition dual_class(const Partition& lambda, const GrassmannianId& space) {
    if (!space.contains(lambda))
        throw InvalidConditionError("dual_class: class outside box");
    const int rows = space.box_rows();
    const int cols = space.box_cols();
    std::vector<int> comp;
    comp.reserve(static_cast<size_t>(rows));
    for (int i = rows; i >= 1; --i) comp.push_back(cols - lambda.part(i));
    return Partition(std::move(comp));
}

SchubertClass special_class_for_incidence(int N, int a) {
    if (a < 0 || a > N - 2)
        throw InvalidConditionError("incidence condition dimension " + std::to_string(a) +
                                    " outside [0, N-2] for N = " + std::to_string(N));
    GrassmannianId lines(1, N);
    return SchubertClass(lines, Partition{N - 1 - a});
}

} // namespace scrollcount
