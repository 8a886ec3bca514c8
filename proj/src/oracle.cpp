#include "scrollcount/oracle.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "scrollcount/schubert.hpp"

namespace scrollcount {

namespace {

// Virtual dimension of the moduli of degree-d stable maps with n markings;
// an invariant vanishes unless its insertions have exactly this total weight.
int grading_target(const GrassmannianId& space, int degree, int n) {
    return space.dim() + degree * space.chern_one() + n - 3;
}

int total_weight(const std::vector<Partition>& classes) {
    int w = 0;
    for (const auto& p : classes) w += p.weight();
    return w;
}

// Canonical order on insertion classes: heavier first, then lexicographically
// larger parts, so that every multiset sorts to a unique representative.
bool class_before(const Partition& a, const Partition& b) {
    if (a.weight() != b.weight()) return a.weight() > b.weight();
    return a.parts() > b.parts();
}

std::vector<Partition> sorted_classes(std::vector<Partition> classes) {
    std::sort(classes.begin(), classes.end(), class_before);
    return classes;
}

mpz_class binomial(int m, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m),
                 static_cast<unsigned long>(k));
    return r;
}

struct ClassGroup {
    Partition value;
    int mult = 0;
};

std::vector<ClassGroup> group_classes(const std::vector<Partition>& sorted) {
    std::vector<ClassGroup> groups;
    for (const auto& p : sorted) {
        if (!groups.empty() && groups.back().value == p) {
            ++groups.back().mult;
        } else {
            groups.push_back({p, 1});
        }
    }
    return groups;
}

// All multisets from the canonically ordered class list with the given slot
// count and total weight, emitted in canonical order.
std::vector<std::vector<Partition>> weight_multisets(const std::vector<Partition>& flat,
                                                     int slots, int target) {
    std::vector<std::vector<Partition>> out;
    std::vector<Partition> cur;
    std::function<void(size_t, int, int)> dfs = [&](size_t start, int left,
                                                    int remaining) {
        if (left == 0) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        for (size_t i = start; i < flat.size(); ++i) {
            int w = flat[i].weight();
            if (w * left < remaining) break;
            if (remaining - w < 2 * (left - 1)) continue;
            cur.push_back(flat[i]);
            dfs(i, left - 1, remaining - w);
            cur.pop_back();
        }
    };
    if (slots == 0) {
        if (target == 0) out.emplace_back();
        return out;
    }
    dfs(0, slots, target);
    return out;
}

// Classes of weight >= 2 in canonical order: the reduced insertions.
std::vector<Partition> reduced_classes(const GrassmannianId& space) {
    std::vector<Partition> flat;
    for (const auto& p : basis(space))
        if (p.weight() >= 2) flat.push_back(p);
    std::sort(flat.begin(), flat.end(), class_before);
    return flat;
}

// Degree-one invariants in closed form. A degree-one rational curve in
// projective space is a line, and in a Grassmannian of lines it is a pencil:
// the lines through a point p inside a plane Λ. Both moduli are classical
// parameter spaces, so the invariant is an honest intersection number there.
//
// For P^m an insertion h^a forces the marked point into an (m−a)-plane; the
// sweep of that condition over the line's points is the special class
// σ_{a−1}, giving ∫ Π σ_{a_i−1} over the Grassmannian of lines.
//
// For G(1,m) the pencil variety is the P² bundle F = P(S) over the
// Grassmannian of planes (S the rank-3 tautological subbundle, h the class
// of pencils whose base point lies in a hyperplane). The universal pencil is
// the projectivization of V = S/O(−1), whose Segre classes are
// s_j(V) = σ_j − h·σ_{j−1}; pushing the Schur expression of a Schubert class
// down the pencil telescopes to
//     c_λ = h^{λ₂}·σ_{λ₁−1} − h^{λ₁+1}·σ_{λ₂−2},
// and powers of h integrate out by ∫_F h^{2+j}·X = ∫ σ_j·X. The invariant is
// the expanded product of the c_λ integrated this way.
std::optional<mpz_class> degree_one_invariant(const GrassmannianId& space,
                                              const std::vector<Partition>& classes) {
    if (space.k == 0) {
        std::vector<Partition> factors;
        GrassmannianId lines(1, space.n);
        for (const auto& p : classes)
            factors.emplace_back(std::vector<int>{p.part(1) - 1});
        return intersection_number(factors, lines);
    }
    if (space.k != 1) return std::nullopt;

    const int m = space.n;
    GrassmannianId planes(2, m);
    auto special = [&](int j) -> std::optional<Partition> {
        if (j < 0 || j > m - 2) return std::nullopt; // zero class
        return Partition(std::vector<int>{j});
    };
    mpz_class total = 0;
    // Expand the product of the two-term insertion classes by recursion.
    std::function<void(size_t, int, CycleSum, int)> expand =
        [&](size_t i, int hpow, CycleSum acc, int sign) {
            if (acc.is_zero()) return;
            if (i == classes.size()) {
                auto s = special(hpow - 2);
                if (!s) return;
                // At top degree only the class of a point survives, with its
                // coefficient equal to the integral.
                CycleSum prod = product(acc, *s);
                for (const auto& [mu, coeff] : prod.terms())
                    if (mu.weight() == planes.dim()) total += sign * coeff;
                return;
            }
            int l1 = classes[i].part(1);
            int l2 = classes[i].part(2);
            if (auto s = special(l1 - 1))
                expand(i + 1, hpow + l2, product(acc, *s), sign);
            if (l2 >= 2) {
                if (auto s = special(l2 - 2))
                    expand(i + 1, hpow + l1 + 1, product(acc, *s), -sign);
            }
        };
    CycleSum unit(planes);
    unit.add(Partition(), 1);
    expand(0, 0, std::move(unit), 1);
    return total;
}

// Degree-two invariants with single-row insertions, in closed form. A generic
// degree-two rational curve in G(1,m) is one ruling of a quadric surface, and
// quadric surfaces form the bundle X = P(Sym²S*) over the Grassmannian of
// 3-spaces in P^m (S the rank-4 tautological subbundle). X has dimension
// 4m−3, the dimension of the space of maps, and each quadric carries two
// rulings, so the invariant is twice an intersection number on X.
//
// An incidence insertion asks some ruling member to meet a linear space L,
// which happens exactly when the quadric itself meets L:
//   · L of dimension m−3 meets the quadric's 3-space in a moving point that
//     must land on the quadric — the divisor ξ + 2σ_1 (ξ = c₁(O_X(1)); the
//     twist is the trace line of L in S, of first Chern class −σ_1);
//   · L a point (m = 4) must lie in the 3-space and on the quadric, σ_1·ξ,
//     the trace line now being trivial.
// Deeper incidences put the trace on singular Schubert loci with no clean
// class, so only m = 3 and m = 4 are handled — exactly the range where the
// associativity relations provably leave the all-incidence levels open.
//
// Fibre powers of ξ integrate to Segre classes, ∫_X ξ^{9+j}·β = ∫ s_j·β; on
// G(3,4) the total Chern class of Sym²S* collapses to (1−σ_1)^{−5}, giving
// s_j = (−1)^j C(5,j) σ_1^j, and on G(3,3) (a point) only s_0 = 1 survives.
std::optional<mpz_class> degree_two_invariant(const GrassmannianId& space,
                                              const std::vector<Partition>& classes) {
    if (space.k != 1 || (space.n != 3 && space.n != 4)) return std::nullopt;
    int meet_plane = 0; // trace point moves: ξ + 2σ_1
    int meet_point = 0; // 3-space through a fixed point: σ_1·ξ
    for (const auto& p : classes) {
        if (p.part(2) != 0) return std::nullopt;
        if (p.part(1) == space.n - 2) ++meet_plane;
        else if (p.part(1) == space.n - 1) ++meet_point;
        else return std::nullopt;
    }
    if (space.n == 3) {
        // The bundle base G(3,3) is a point, so the parameter space is the P^9
        // of quadric surfaces and the through-a-point trace is a hyperplane.
        if (meet_plane != 0 || meet_point != 9) return std::nullopt;
        return mpz_class(2);
    }
    if (2 * meet_point + meet_plane != 13) return std::nullopt;
    mpz_class integral = 0;
    for (int t = 0; t <= meet_plane; ++t) {
        int j = 4 - meet_point - t; // Segre index after ξ-expansion
        if (j < 0 || j > 4) continue;
        mpz_class term = binomial(meet_plane, t) * binomial(5, j);
        mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), static_cast<mp_bitcnt_t>(t));
        integral += (j % 2 == 0) ? term : -term;
    }
    return mpz_class(2 * integral);
}

// Dispatch table for the closed-form anchors above.
std::optional<mpz_class> closed_form_invariant(const GrassmannianId& space, int degree,
                                               const std::vector<Partition>& classes) {
    if (degree == 1) return degree_one_invariant(space, classes);
    if (degree == 2) return degree_two_invariant(space, classes);
    return std::nullopt;
}

} // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Anchor: return "anchor";
        case Provenance::Derived: return "derived";
        case Provenance::Imported: return "imported";
    }
    return "unknown";
}

InvariantKey InvariantKey::make(const GrassmannianId& space, int degree,
                                std::vector<Partition> classes) {
    if (degree < 0)
        throw InvalidConditionError("invariant degree must be non-negative");
    for (const auto& p : classes) {
        if (!space.contains(p))
            throw InvalidConditionError("class " + p.to_string() +
                                        " does not fit in the box of " +
                                        space.to_string());
    }
    InvariantKey key;
    key.space = space;
    key.degree = degree;
    key.classes = sorted_classes(std::move(classes));
    return key;
}

std::string InvariantKey::to_string() const {
    std::string s = "I_" + std::to_string(degree) + "(";
    for (size_t i = 0; i < classes.size(); ++i) {
        if (i) s += ",";
        s += classes[i].to_string();
    }
    return s + ") on " + space.to_string();
}

TranslatedProblem translate_conditions(const IncidenceProblem& problem) {
    TranslatedProblem t;
    t.space = GrassmannianId(1, problem.spec.N);
    t.degree = problem.spec.degree();
    for (int a : problem.cond_dims)
        t.classes.push_back(special_class_for_incidence(problem.spec.N, a).lambda);
    return t;
}

mpz_class classical_invariant(const GrassmannianId& space,
                              const std::vector<Partition>& classes) {
    for (const auto& p : classes) {
        if (!space.contains(p))
            throw InvalidConditionError("class " + p.to_string() +
                                        " does not fit in the box of " +
                                        space.to_string());
    }
    if (classes.size() != 3) return 0;
    if (total_weight(classes) != space.dim()) return 0;
    return intersection_number(classes, space);
}

// Solves all invariants of one degree on one space by exact elimination over
// the WDVV relations, assuming every strictly lower degree is already stored.
// Unknowns are canonical keys grouped by their weight profile; relations are
// generated so that the only same-level unknowns they touch sit in profiles
// processed earlier or in the small block of keys differing in a single
// class, which keeps the elimination sparse.
class WdvvSolver {
public:
    WdvvSolver(GwOracle& oracle, const GrassmannianId& space, int degree,
               const Budget& budget)
        : oracle_(oracle), space_(space), d_(degree), budget_(budget), sigma1_{1},
          flat_(reduced_classes(space)) {
        by_weight_.resize(static_cast<size_t>(space_.dim()) + 1);
        for (const auto& p : basis(space_))
            by_weight_[static_cast<size_t>(p.weight())].push_back(p);
    }

    void solve(int max_insertions) {
        // Register every level's keys up front: relations generated at one
        // level may involve keys one level up (hyperplane-slot instances) or
        // down (stripped divisors), and all of them need column ids.
        std::vector<std::vector<int>> fresh_at(static_cast<size_t>(max_insertions) + 1);
        for (int n = 0; n <= max_insertions; ++n)
            fresh_at[static_cast<size_t>(n)] = collect_level(n);
        // Work from the deepest level down: a level's plain relations close it
        // once the level above is known (the hyperplane-slot family couples
        // one level up), and the capped top level closes standalone, so the
        // descent keeps the pending-row front small.
        for (int n = max_insertions; n >= 3; --n) {
            const std::vector<int>& fresh = fresh_at[static_cast<size_t>(n)];
            if (fresh.empty()) continue;
            budget_.check("solving degree-" + std::to_string(d_) +
                          " invariants on " + space_.to_string());
            std::map<std::vector<int>, std::vector<int>> profiles;
            for (int id : fresh)
                profiles[weight_profile(key_of_[static_cast<size_t>(id)])].push_back(id);
            for (bool fallback : {false, true}) {
                for (auto it = profiles.rbegin(); it != profiles.rend(); ++it) {
                    for (int id : it->second) {
                        if (col_.count(key_of_[static_cast<size_t>(id)]))
                            attack(id, fallback);
                    }
                }
            }
        }
        // Rescue sweeps: the per-key attack stops as soon as its own key is
        // settled or stalls, so relations anchored at easy keys but coupling
        // into the stragglers may never have been inserted. Sweep every key
        // in range — including keys solved in earlier rounds — with a bounded
        // gainless streak per key, and repeat while a sweep still adds rank:
        // instance dedup makes each new sweep resume deeper into each key's
        // family, so in the limit the sweeps exhaust the whole supply.
        bool progress = true;
        while (progress && !col_.empty()) {
            progress = false;
            for (int n = 3; n <= max_insertions && !col_.empty(); ++n) {
                int target = grading_target(space_, d_, n);
                if (target < 2 * n || target > space_.dim() * n) continue;
                for (const auto& key : enumerate_level(n, target)) {
                    int gainless = 0;
                    for_each_instance(key, true,
                                      [&](const Partition& a, const Partition& b,
                                          const Partition& q, const Partition& r,
                                          const std::vector<Partition>& S) {
                        if (try_instance(a, b, q, r, S)) {
                            gainless = 0;
                            progress = true;
                        } else {
                            ++gainless;
                        }
                        return !col_.empty() && gainless < 64;
                    });
                    if (col_.empty()) break;
                }
            }
        }
        for (const auto& [key, id] : col_) oracle_.undetermined_.emplace(key, 1);
        col_.clear();
        rows_.clear();
        occurs_.clear();
        key_of_.clear();
        seen_instances_.clear();
    }

    // Re-evaluates every relation instance against stored values; all of them
    // must close to zero. Returns the number of instances checked.
    std::size_t verify(int max_insertions) {
        std::size_t checked = 0;
        for (int n = 3; n <= max_insertions; ++n) {
            budget_.check("auditing degree-" + std::to_string(d_) +
                          " invariants on " + space_.to_string());
            int target = grading_target(space_, d_, n);
            if (target < 2 * n || target > space_.dim() * n) continue;
            for (const auto& key : enumerate_level(n, target)) {
                if (!oracle_.store_.count(key)) continue;
                for_each_instance(key, true, [&](const Partition& a, const Partition& b,
                                                 const Partition& q, const Partition& r,
                                                 const std::vector<Partition>& S) {
                    Build out;
                    if (!build_relation(a, b, q, r, S, out)) return true;
                    if (!out.lhs.empty())
                        throw AuditError("audit relation touches an unsolved value near " +
                                         key.to_string());
                    if (out.rhs != 0)
                        throw AuditError("WDVV relation violated near " + key.to_string());
                    ++checked;
                    return true;
                });
            }
        }
        seen_instances_.clear();
        return checked;
    }

private:
    struct Row {
        std::map<int, mpq_class> a;
        mpq_class rhs;
    };

    struct Build {
        std::map<int, mpq_class> lhs;
        mpq_class rhs;
        bool blocked = false;
    };

    struct Reduced {
        InvariantKey key;
        mpz_class factor;
        bool zero = false;
    };

    std::vector<int> weight_profile(const InvariantKey& key) const {
        std::vector<int> w;
        w.reserve(key.classes.size());
        for (const auto& p : key.classes) w.push_back(p.weight());
        return w;
    }

    // Registers the level's canonical keys as columns; previously undetermined
    // keys are pulled back in for another try at the larger cap.
    std::vector<int> collect_level(int n) {
        std::vector<int> fresh;
        int target = grading_target(space_, d_, n);
        if (target < 2 * n || target > space_.dim() * n) return fresh;
        for (auto& key : enumerate_level(n, target)) {
            if (oracle_.store_.count(key) || col_.count(key)) continue;
            oracle_.undetermined_.erase(key);
            int id = static_cast<int>(key_of_.size());
            key_of_.push_back(key);
            col_.emplace(std::move(key), id);
            fresh.push_back(id);
        }
        return fresh;
    }

    std::vector<InvariantKey> enumerate_level(int n, int target) const {
        std::vector<InvariantKey> out;
        for (auto& classes : weight_multisets(flat_, n, target)) {
            InvariantKey key;
            key.space = space_;
            key.degree = d_;
            key.classes = std::move(classes);
            out.push_back(std::move(key));
        }
        return out;
    }

    const std::map<Partition, mpz_class>& expand(const Partition& u,
                                                 const Partition& v) {
        auto it = product_cache_.find({u, v});
        if (it == product_cache_.end()) {
            // Giambelli expansion runs on the second factor; keep it small.
            const Partition& big = (u.weight() >= v.weight()) ? u : v;
            const Partition& small = (u.weight() >= v.weight()) ? v : u;
            it = product_cache_.emplace(std::make_pair(u, v),
                                        product(big, small, space_).terms()).first;
        }
        return it->second;
    }

    Reduced reduce(int degree, std::vector<Partition> raw) const {
        Reduced r;
        r.factor = 1;
        std::vector<Partition> kept;
        kept.reserve(raw.size());
        for (auto& p : raw) {
            int w = p.weight();
            if (w == 0) { // fundamental-class insertion kills positive degree
                r.zero = true;
                return r;
            }
            if (w == 1) { // divisor axiom
                r.factor *= degree;
                continue;
            }
            kept.push_back(std::move(p));
        }
        if (total_weight(kept) !=
            grading_target(space_, degree, static_cast<int>(kept.size()))) {
            r.zero = true;
            return r;
        }
        r.key.space = space_;
        r.key.degree = degree;
        r.key.classes = sorted_classes(std::move(kept));
        return r;
    }

    // Value of a strictly lower-degree invariant. nullopt when it hinges on a
    // value previously reported as undeterminable.
    std::optional<mpq_class> lower_value(int degree, std::vector<Partition> raw) const {
        Reduced r = reduce(degree, std::move(raw));
        if (r.zero) return mpq_class(0);
        auto it = oracle_.store_.find(r.key);
        if (it != oracle_.store_.end()) return mpq_class(it->second.value * r.factor);
        if (oracle_.undetermined_.count(r.key)) return std::nullopt;
        throw AuditError("internal: prerequisite value missing: " + r.key.to_string());
    }

    void add_term(Build& b, std::vector<Partition> raw, const mpq_class& coeff) {
        if (b.blocked || coeff == 0) return;
        Reduced r = reduce(d_, std::move(raw));
        if (r.zero) return;
        mpq_class c = coeff * r.factor;
        auto it = oracle_.store_.find(r.key);
        if (it != oracle_.store_.end()) {
            b.rhs -= c * it->second.value;
            return;
        }
        auto ct = col_.find(r.key);
        if (ct != col_.end()) {
            mpq_class& slot = b.lhs[ct->second];
            slot += c;
            if (slot == 0) b.lhs.erase(ct->second);
            return;
        }
        // Neither stored nor registered: the term lives past the current
        // insertion cap (hyperplane-slot instances reach one level up), so
        // this relation cannot be used at this cap.
        b.blocked = true;
    }

    // One WDVV instance with distinguished insertions (a, b, q, r) and spare
    // insertions S: the two ways of splitting off (q, r) agree. Contraction
    // terms stay at this degree; genuine splits are products of lower-degree
    // values. Returns false when the instance references undeterminable data.
    bool build_relation(const Partition& a, const Partition& b, const Partition& q,
                        const Partition& r, const std::vector<Partition>& S,
                        Build& out) {
        if (++relations_built_ % 64 == 0)
            budget_.check("solving WDVV relations on " + space_.to_string());
        for (const auto& [x, c] : expand(a, b)) {
            std::vector<Partition> t{x, q, r};
            t.insert(t.end(), S.begin(), S.end());
            add_term(out, std::move(t), mpq_class(c));
        }
        for (const auto& [m, c] : expand(q, r)) {
            std::vector<Partition> t{a, b, m};
            t.insert(t.end(), S.begin(), S.end());
            add_term(out, std::move(t), mpq_class(c));
        }
        for (const auto& [y, c] : expand(a, q)) {
            std::vector<Partition> t{y, b, r};
            t.insert(t.end(), S.begin(), S.end());
            add_term(out, std::move(t), mpq_class(-c));
        }
        for (const auto& [m, c] : expand(b, r)) {
            std::vector<Partition> t{a, q, m};
            t.insert(t.end(), S.begin(), S.end());
            add_term(out, std::move(t), mpq_class(-c));
        }
        if (out.blocked) return false;

        auto groups = group_classes(S);
        bool ok = true;
        std::vector<int> take(groups.size(), 0);
        std::function<void(size_t)> split = [&](size_t gi) {
            if (!ok) return;
            if (gi == groups.size()) {
                mpz_class f = 1;
                std::vector<Partition> s1, s2;
                for (size_t i = 0; i < groups.size(); ++i) {
                    f *= binomial(groups[i].mult, take[i]);
                    for (int c = 0; c < take[i]; ++c) s1.push_back(groups[i].value);
                    for (int c = take[i]; c < groups[i].mult; ++c)
                        s2.push_back(groups[i].value);
                }
                for (int d1 = 1; d1 < d_ && ok; ++d1) {
                    int d2 = d_ - d1;
                    // +F·I_{d1}(a,b,S1,x)·I_{d2}(x∨,q,r,S2)
                    // −F·I_{d1}(a,q,S1,x)·I_{d2}(x∨,b,r,S2)
                    const Partition* pairs[2][2] = {{&b, &q}, {&q, &b}};
                    for (int side = 0; side < 2 && ok; ++side) {
                        const Partition& u = *pairs[side][0];
                        const Partition& w = *pairs[side][1];
                        int sign = side == 0 ? 1 : -1;
                        int wx = grading_target(space_, d1,
                                                static_cast<int>(s1.size()) + 3) -
                                 a.weight() - u.weight() - total_weight(s1);
                        if (wx < 0 || wx > space_.dim()) continue;
                        for (const auto& x : by_weight_[static_cast<size_t>(wx)]) {
                            std::vector<Partition> left{a, u, x};
                            left.insert(left.end(), s1.begin(), s1.end());
                            auto v1 = lower_value(d1, std::move(left));
                            if (!v1) { ok = false; break; }
                            if (*v1 == 0) continue;
                            std::vector<Partition> right{dual_class(x, space_), w, r};
                            right.insert(right.end(), s2.begin(), s2.end());
                            auto v2 = lower_value(d2, std::move(right));
                            if (!v2) { ok = false; break; }
                            if (*v2 == 0) continue;
                            out.rhs -= sign * mpq_class(f) * *v1 * *v2;
                        }
                    }
                }
                return;
            }
            for (take[gi] = 0; take[gi] <= groups[gi].mult && ok; ++take[gi])
                split(gi + 1);
        };
        split(0);
        return ok && !out.blocked;
    }

    // Enumerates relation instances expected to pin down the given key: one
    // of its insertions p is written as a factor of a product a∪b, and (q, r)
    // range over the other insertions. The cheap pass keeps a = σ_1; the wide
    // pass sweeps every ordered factorization of p through the basis.
    // A second family places the hyperplane class itself in the q and/or r
    // slot. Those relations are not reachable from reduced keys alone: after
    // the divisor axiom they tie a level to the one above it, and on the top
    // level (where nothing lives above) they supply pure extra relations that
    // close the rank the plain family provably misses there.
    template <typename Fn>
    void for_each_instance(const InvariantKey& key, bool wide, Fn fn) {
        auto groups = group_classes(key.classes);
        const int g = static_cast<int>(groups.size());
        bool stop = false;
        auto feasible = [&](int iq, int ip, int ir) {
            for (int gi = 0; gi < g; ++gi) {
                int use = (gi == iq) + (gi == ip) + (gi == ir);
                if (use > groups[static_cast<size_t>(gi)].mult) return false;
            }
            return true;
        };
        auto leftovers = [&](int iq, int ip, int ir) {
            std::vector<Partition> S;
            for (int gi = 0; gi < g; ++gi) {
                int use = (gi == iq) + (gi == ip) + (gi == ir);
                for (int c = use; c < groups[static_cast<size_t>(gi)].mult; ++c)
                    S.push_back(groups[static_cast<size_t>(gi)].value);
            }
            return S;
        };
        auto factorizations = [&](const Partition& q, const Partition& p,
                                  const Partition& r, const std::vector<Partition>& S) {
            int wa_max = wide ? p.weight() - 1 : 1;
            for (int wa = 1; wa <= wa_max && !stop; ++wa) {
                int wb = p.weight() - wa;
                if (wb < 1 || wb > space_.dim()) continue;
                for (const auto& a : by_weight_[static_cast<size_t>(wa)]) {
                    if (stop) break;
                    for (const auto& b : by_weight_[static_cast<size_t>(wb)]) {
                        if (expand(a, b).count(p) == 0) continue;
                        std::vector<Partition> sig{a, b, q, r};
                        sig.insert(sig.end(), S.begin(), S.end());
                        if (!seen_instances_.insert(std::move(sig)).second) continue;
                        if (!fn(a, b, q, r, S)) { stop = true; break; }
                    }
                }
            }
        };
        for (int iq = 0; iq < g && !stop; ++iq) {
            for (int ip = 0; ip < g && !stop; ++ip) {
                for (int ir = 0; ir < g && !stop; ++ir) {
                    if (!feasible(iq, ip, ir)) continue;
                    factorizations(groups[static_cast<size_t>(iq)].value,
                                   groups[static_cast<size_t>(ip)].value,
                                   groups[static_cast<size_t>(ir)].value,
                                   leftovers(iq, ip, ir));
                }
            }
        }
        for (int ip = 0; ip < g && !stop; ++ip) {
            const Partition& p = groups[static_cast<size_t>(ip)].value;
            factorizations(sigma1_, p, sigma1_, leftovers(-1, ip, -1));
            for (int ir = 0; ir < g && !stop; ++ir) {
                if (!feasible(-1, ip, ir)) continue;
                const Partition& r = groups[static_cast<size_t>(ir)].value;
                factorizations(sigma1_, p, r, leftovers(-1, ip, ir));
                if (stop) break;
                factorizations(r, p, sigma1_, leftovers(-1, ip, ir));
            }
        }
    }

    // Builds and inserts one relation; returns true when it added rank.
    bool try_instance(const Partition& a, const Partition& b, const Partition& q,
                      const Partition& r, const std::vector<Partition>& S) {
        Build out;
        if (!build_relation(a, b, q, r, S, out)) return false;
        return insert_row(Row{std::move(out.lhs), std::move(out.rhs)});
    }

    void attack(int id, bool fallback) {
        const InvariantKey key = key_of_[static_cast<size_t>(id)];
        int gainless = 0;
        for_each_instance(key, fallback,
                          [&](const Partition& a, const Partition& b, const Partition& q,
                              const Partition& r, const std::vector<Partition>& S) {
            gainless = try_instance(a, b, q, r, S) ? 0 : gainless + 1;
            if (col_.count(key) == 0) return false; // settled
            // The wide pass gives up on a key once fresh relations stop
            // adding rank; later levels and the rescue sweeps revisit it.
            return !fallback || gainless < 24;
        });
    }

    static void subtract_scaled(Row& target, const Row& src, const mpq_class& c,
                                std::vector<int>* added = nullptr) {
        if (c == 0) return;
        for (const auto& [k, sc] : src.a) {
            auto it = target.a.find(k);
            if (it == target.a.end()) {
                mpq_class nv = -c * sc;
                if (nv != 0) {
                    target.a.emplace(k, std::move(nv));
                    if (added) added->push_back(k);
                }
            } else {
                it->second -= c * sc;
                if (it->second == 0) target.a.erase(it);
            }
        }
        target.rhs -= c * src.rhs;
    }

    bool insert_row(Row row) {
        while (!row.a.empty()) {
            int v = row.a.begin()->first;
            auto it = rows_.find(v);
            if (it == rows_.end()) break;
            mpq_class c = row.a.begin()->second; // copy: the entry is erased below
            subtract_scaled(row, it->second, c);
        }
        if (row.a.empty()) {
            if (row.rhs != 0)
                throw AuditError("inconsistent WDVV relations on " + space_.to_string());
            return false;
        }
        int v = row.a.begin()->first;
        mpq_class lead = row.a.begin()->second;
        for (auto& [k, c] : row.a) c /= lead;
        row.rhs /= lead;
        std::vector<int> dirty{v};
        // Eliminate v from the rows that carry it; the occurrence index keeps
        // this proportional to the actual fill-in (entries are lazily stale).
        if (auto oc = occurs_.find(v); oc != occurs_.end()) {
            std::vector<int> candidates = std::move(oc->second);
            occurs_.erase(oc);
            std::vector<int> added;
            for (int pv : candidates) {
                auto it = rows_.find(pv);
                if (it == rows_.end()) continue;
                auto f = it->second.a.find(v);
                if (f == it->second.a.end()) continue;
                mpq_class c = f->second; // copy: the entry is erased below
                added.clear();
                subtract_scaled(it->second, row, c, &added);
                for (int k : added) occurs_[k].push_back(pv);
                dirty.push_back(pv);
            }
        }
        for (const auto& [k, c] : row.a) occurs_[k].push_back(v);
        rows_.emplace(v, std::move(row));
        flush(std::move(dirty));
        return true;
    }

    void flush(std::vector<int> dirty) {
        while (!dirty.empty()) {
            int pv = dirty.back();
            dirty.pop_back();
            auto it = rows_.find(pv);
            if (it == rows_.end() || it->second.a.size() != 1) continue;
            mpq_class value = it->second.rhs;
            const InvariantKey key = key_of_[static_cast<size_t>(pv)];
            rows_.erase(it);
            if (value.get_den() != 1)
                throw AuditError("WDVV solution is not an integer for " + key.to_string());
            oracle_.store_.emplace(key,
                                   StoredInvariant{value.get_num(), Provenance::Derived});
            col_.erase(key);
        }
    }

    GwOracle& oracle_;
    GrassmannianId space_;
    int d_;
    Budget budget_;
    Partition sigma1_;
    std::vector<std::vector<Partition>> by_weight_;
    std::vector<Partition> flat_; // weight >= 2, canonically ordered
    std::map<InvariantKey, int> col_;
    std::vector<InvariantKey> key_of_;
    std::map<int, Row> rows_;
    // Column id -> pivots of rows that may contain it (entries go stale when
    // an elimination drops the coefficient; they are re-validated on use).
    std::map<int, std::vector<int>> occurs_;
    std::set<std::vector<Partition>> seen_instances_;
    std::map<std::pair<Partition, Partition>, std::map<Partition, mpz_class>>
        product_cache_;
    long relations_built_ = 0;
};

void GwOracle::solve_closed_forms(const GrassmannianId& space, int degree,
                                  int max_insertions, const Budget& budget) {
    std::vector<Partition> flat = reduced_classes(space);
    for (int n = 0; n <= max_insertions; ++n) {
        budget.check("evaluating closed-form invariants on " + space.to_string());
        int target = grading_target(space, degree, n);
        if (target < 2 * n || target > space.dim() * n) continue;
        for (auto& classes : weight_multisets(flat, n, target)) {
            InvariantKey key;
            key.space = space;
            key.degree = degree;
            key.classes = std::move(classes);
            if (store_.count(key)) continue;
            auto value = closed_form_invariant(space, degree, key.classes);
            if (!value) continue; // no parameter-space formula here
            undetermined_.erase(key);
            store_.emplace(std::move(key),
                           StoredInvariant{std::move(*value), Provenance::Anchor});
        }
    }
}

void GwOracle::ensure_solved(const GrassmannianId& space, int degree,
                             int max_insertions, const Budget& budget) {
    for (int d = 1; d <= degree; ++d) {
        auto cap_key = std::make_pair(space, d);
        auto it = solved_caps_.find(cap_key);
        if (it != solved_caps_.end() && it->second >= max_insertions) continue;
        if (d == 1 && space.k <= 1) {
            solve_closed_forms(space, 1, max_insertions, budget);
        } else {
            if (d == 2) solve_closed_forms(space, 2, max_insertions, budget);
            WdvvSolver solver(*this, space, d, budget);
            solver.solve(max_insertions);
        }
        solved_caps_[cap_key] = max_insertions;
    }
}

mpz_class GwOracle::invariant(const GrassmannianId& space, int degree,
                              const std::vector<Partition>& classes,
                              const Budget& budget) {
    if (degree < 0)
        throw InvalidConditionError("invariant degree must be non-negative");
    for (const auto& p : classes) {
        if (!space.contains(p))
            throw InvalidConditionError("class " + p.to_string() +
                                        " does not fit in the box of " +
                                        space.to_string());
    }
    if (degree == 0) return classical_invariant(space, classes);

    mpz_class factor = 1;
    std::vector<Partition> kept;
    for (const auto& p : classes) {
        if (p.weight() == 0) return 0; // fundamental class
        if (p.weight() == 1) {         // divisor axiom
            factor *= degree;
            continue;
        }
        kept.push_back(p);
    }
    if (total_weight(kept) !=
        grading_target(space, degree, static_cast<int>(kept.size())))
        return 0;

    InvariantKey key = InvariantKey::make(space, degree, std::move(kept));
    auto it = store_.find(key);
    if (it == store_.end()) {
        ensure_solved(space, degree,
                      std::max(2, static_cast<int>(key.classes.size())), budget);
        it = store_.find(key);
    }
    if (it == store_.end())
        throw UndeterminedError("WDVV relations did not determine " + key.to_string());
    return it->second.value * factor;
}

mpz_class GwOracle::scroll_count(const IncidenceProblem& problem,
                                 const Budget& budget) {
    if (!problem.spec.balanced())
        throw ScopeError("characteristic numbers are computed for balanced scrolls; "
                         "bidegree (" + std::to_string(problem.spec.k) + "," +
                         std::to_string(problem.spec.l) + ") is unbalanced");
    if (!is_enumerative(problem))
        throw DimensionError("condition sum " + std::to_string(condition_sum(problem)) +
                             " does not match the family dimension " +
                             std::to_string(scroll_family_dim(problem.spec)));
    TranslatedProblem t = translate_conditions(problem);
    mpz_class inv = invariant(t.space, t.degree, t.classes, budget);
    if (t.degree == 2) {
        // A quadric carries two rulings, so the invariant counts it twice.
        if (inv % 2 != 0)
            throw AuditError("degree-2 invariant is odd; ruling factor cannot divide");
        return inv / 2;
    }
    return inv;
}

std::size_t GwOracle::audit(const GrassmannianId& space, int max_degree,
                            int max_insertions, const Budget& budget) {
    std::size_t checked = 0;
    for (int d = 1; d <= max_degree; ++d) {
        ensure_solved(space, d, max_insertions, budget);
        WdvvSolver solver(*this, space, d, budget);
        checked += solver.verify(max_insertions);
    }
    return checked;
}

void GwOracle::import_entry(const InvariantKey& key, const mpz_class& value) {
    InvariantKey canon;
    try {
        canon = InvariantKey::make(key.space, key.degree, key.classes);
    } catch (const Error& e) {
        throw CacheIntegrityError(std::string("malformed invariant key: ") + e.what());
    }
    if (canon.degree < 1)
        throw CacheIntegrityError("imported invariants must have positive degree");
    for (const auto& p : canon.classes) {
        if (p.weight() < 2)
            throw CacheIntegrityError("imported key is not in reduced form: " +
                                      canon.to_string());
    }
    if (total_weight(canon.classes) !=
        grading_target(canon.space, canon.degree,
                       static_cast<int>(canon.classes.size())))
        throw CacheIntegrityError("imported key violates the dimension grading: " +
                                  canon.to_string());
    if (value < 0)
        throw CacheIntegrityError("imported invariant is negative: " + canon.to_string());
    auto it = store_.find(canon);
    if (it != store_.end()) {
        if (it->second.value != value)
            throw CacheIntegrityError("conflicting values for " + canon.to_string() +
                                      ": stored " + it->second.value.get_str() +
                                      ", imported " + value.get_str());
        return;
    }
    undetermined_.erase(canon);
    store_.emplace(std::move(canon), StoredInvariant{value, Provenance::Imported});
}

} // namespace scrollcount
