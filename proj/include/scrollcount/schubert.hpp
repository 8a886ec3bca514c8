#pragma once

#include <vector>

#include "scrollcount/partitions.hpp"

namespace scrollcount {

// Classical Schubert calculus on G(k,n), exact over arbitrary-precision
// integers. General products go through the Giambelli determinant expanded
// into iterated Pieri steps; every intermediate partition is clipped to the
// box, which is exactly the quotient map from symmetric functions onto the
// cohomology ring.

// All partitions fitting in the (rows × cols) box, ordered lexicographically.
std::vector<Partition> all_partitions_in_box(int rows, int cols);

// All Schubert-basis partitions of the given space.
std::vector<Partition> basis(const GrassmannianId& space);

// The class of a point: the full box.
Partition point_class(const GrassmannianId& space);

// Pieri rule: σ_a · σ_λ = Σ σ_μ over horizontal-strip extensions μ ⊇ λ with
// |μ| = |λ| + a that stay inside the box. Coefficients are all 1; the sum may
// be empty.
CycleSum pieri_product(int a, const Partition& lambda, const GrassmannianId& space);

// General cup product σ_λ · σ_μ. The right factor is expanded by the
// Giambelli determinant det(h_{μ_i + j − i}) into signed products of special
// classes, which are then applied to σ_λ by iterated Pieri.
CycleSum product(const Partition& lambda, const Partition& mu, const GrassmannianId& space);

// Extends the product linearly over a formal sum.
CycleSum product(const CycleSum& sum, const Partition& mu);

// Intersection number ∫ σ_λ1 · ... · σ_λr: the coefficient of the point
// class. Requires Σ|λ_i| = dim G(k,n); throws DimensionError otherwise.
mpz_class intersection_number(const std::vector<Partition>& classes, const GrassmannianId& space);

// Poincaré dual: the rotated box complement λ∨, the unique class pairing to 1
// against λ.
Partition dual_class(const Partition& lambda, const GrassmannianId& space);

// The Schubert class on G(1,N) of lines meeting a general a-dimensional
// linear subspace of P^N: σ_{N−1−a}. Requires 0 ≤ a ≤ N−2.
SchubertClass special_class_for_incidence(int N, int a);

} // namespace scrollcount
