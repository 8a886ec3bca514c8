#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "scrollcount/errors.hpp"

namespace scrollcount {

// An integer partition λ = (λ_1 ≥ λ_2 ≥ ... ≥ λ_r > 0), stored with trailing
// zeros stripped so that equal partitions compare equal as map keys. |λ| is
// the codimension of the Schubert class it indexes.
class Partition {
public:
    Partition() = default;

    Partition(std::initializer_list<int> parts) : parts_(parts) { normalize(); }

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) { normalize(); }

    // Number of (nonzero) parts.
    int rows() const { return static_cast<int>(parts_.size()); }

    bool empty() const { return parts_.empty(); }

    // λ_i with 1-based i; zero beyond the last part.
    int part(int i) const {
        return (i >= 1 && i <= rows()) ? parts_[static_cast<size_t>(i - 1)] : 0;
    }

    // |λ|: sum of parts, i.e. the codimension of σ_λ.
    int weight() const {
        int w = 0;
        for (int p : parts_) w += p;
        return w;
    }

    bool fits_in_box(int max_rows, int max_cols) const {
        return rows() <= max_rows && (parts_.empty() || parts_.front() <= max_cols);
    }

    const std::vector<int>& parts() const { return parts_; }

    auto operator<=>(const Partition&) const = default;

    // Renders as "(3,1)"; the empty partition as "()".
    std::string to_string() const {
        std::string s = "(";
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        s += ')';
        return s;
    }

private:
    void normalize() {
        for (int p : parts_) {
            if (p < 0) throw InvalidConditionError("partition parts must be non-negative");
        }
        std::sort(parts_.begin(), parts_.end(), std::greater<int>());
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    }

    std::vector<int> parts_;
};

// The Grassmannian G(k, n) of projective k-planes in P^n. Schubert classes
// live in the (k+1) × (n−k) box.
struct GrassmannianId {
    int k = 0;
    int n = 1;

    GrassmannianId() = default;
    GrassmannianId(int k_, int n_) : k(k_), n(n_) {
        if (k < 0 || k >= n) throw InvalidConditionError("G(k,n) requires 0 <= k < n");
    }

    int dim() const { return (k + 1) * (n - k); }
    int box_rows() const { return k + 1; }
    int box_cols() const { return n - k; }

    // Degree of c_1 of the tangent bundle against a degree-1 curve class
    // (the Fano index); for G(k,n) this is n+1.
    int chern_one() const { return n + 1; }

    bool contains(const Partition& p) const { return p.fits_in_box(box_rows(), box_cols()); }

    auto operator<=>(const GrassmannianId&) const = default;

    std::string to_string() const {
        return "G(" + std::to_string(k) + "," + std::to_string(n) + ")";
    }
};

struct SchubertClass {
    GrassmannianId space;
    Partition lambda;

    SchubertClass() = default;
    SchubertClass(GrassmannianId s, Partition l) : space(s), lambda(std::move(l)) {
        if (!space.contains(lambda))
            throw InvalidConditionError("partition " + lambda.to_string() +
                                        " does not fit in the box of " + space.to_string());
    }

    auto operator<=>(const SchubertClass&) const = default;
};

// A formal integer combination of Schubert classes on one Grassmannian.
// Zero coefficients are never stored.
class CycleSum {
public:
    explicit CycleSum(GrassmannianId space) : space_(space) {}

    GrassmannianId space() const { return space_; }

    const std::map<Partition, mpz_class>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    void add(const Partition& p, const mpz_class& coeff) {
        if (coeff == 0) return;
        auto it = terms_.find(p);
        if (it == terms_.end()) {
            terms_.emplace(p, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    CycleSum& operator+=(const CycleSum& other) {
        for (const auto& [p, c] : other.terms_) add(p, c);
        return *this;
    }

    CycleSum& operator*=(const mpz_class& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [p, c] : terms_) c *= s;
        }
        return *this;
    }

    mpz_class coefficient(const Partition& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? mpz_class(0) : it->second;
    }

    bool operator==(const CycleSum& other) const {
        return space_ == other.space_ && terms_ == other.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [p, c] : terms_) {
            if (!s.empty()) s += " + ";
            if (c != 1) s += c.get_str() + "*";
            s += "s" + p.to_string();
        }
        return s;
    }

private:
    GrassmannianId space_;
    std::map<Partition, mpz_class> terms_;
};

} // namespace scrollcount
