#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <vector>

#include "peritl/scalar.hpp"

namespace peritl {

// Canonical invariant of a connectivity diagram on the annulus, following the
// factored form lambda^dag_i Omega^l lambda_i' of the diagram basis:
//   n_out, n_in : node counts on the outer and inner boundary
//   b           : number of bridges (through-lines)
//   l           : winding (signed seam crossings of the bridges) for b > 0,
//                 number of non-contractible loops (>= 0) for b = 0
//   out, in     : strictly increasing arch-opener tuples, 1-indexed; a
//                 crossing arch is the one whose opener exceeds its closer
struct AnnularDiagram {
    int n_out = 0, n_in = 0, b = 0;
    long l = 0;
    std::vector<int> out, in;

    friend auto operator<=>(const AnnularDiagram&, const AnnularDiagram&) = default;

    bool valid() const;
    void check() const;
};

// An endpoint on one of the two boundaries. side: 0 = outer, 1 = inner.
struct Endpoint {
    int side = 0;
    int index = 0;  // 1-indexed node

    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

// One strand with its net signed seam crossings, counted +1 per
// counter-clockwise pass of the radial seam when traversed a -> b.
struct Strand {
    Endpoint a, b;
    int seam_cross = 0;
};

// Concrete strand-level form of a diagram, the intermediate representation
// for composition. Closed loops present before normalization are recorded by
// their signed seam totals.
struct ExplicitForm {
    int n_out = 0, n_in = 0;
    std::vector<Strand> strands;
    std::vector<int> loops;
};

using DiagSum = std::map<AnnularDiagram, Scalar>;

// -- canonical <-> explicit ---------------------------------------------------

ExplicitForm canonical_to_explicit(const AnnularDiagram& d);

// Strips closed loops (beta per contractible one) and reads the canonical
// data back off the strands.
std::pair<AnnularDiagram, Scalar> explicit_to_canonical(const ExplicitForm& e);

// Completes an opener tuple on a circle of `n` nodes to full arch pairs
// (opener, closer, wraps). Positions not used by arches are the bridge slots,
// returned sorted.
struct ArchPair {
    int opener, closer;
    bool wraps;  // crosses the seam (opener > closer)
};
struct Completion {
    std::vector<ArchPair> arches;
    std::vector<int> bridge_slots;
};
Completion complete_tuple(int n, const std::vector<int>& openers);

// -- composition --------------------------------------------------------------

std::pair<AnnularDiagram, Scalar> compose(const AnnularDiagram& d1, const AnnularDiagram& d2);

DiagSum compose(const DiagSum& a, const DiagSum& b);
DiagSum add(const DiagSum& a, const DiagSum& b);
DiagSum scale(const DiagSum& a, const Scalar& c);
DiagSum diag_sum(const AnnularDiagram& d, const Scalar& c = Scalar::one());

// -- generators ---------------------------------------------------------------

AnnularDiagram id_diagram(int n);
AnnularDiagram c_gen(int n, int j);      // c_{n,j} in L(n-2, n), 0 <= j <= n-1
AnnularDiagram cdag_gen(int n, int j);   // c^dag_{n,j} in L(n, n-2)
AnnularDiagram e_gen(int n, int j);      // e_{n,j} in L(n, n)
AnnularDiagram omega(int n);             // Omega_n, n >= 1
AnnularDiagram omega_inv(int n);
AnnularDiagram omega_pow(int n, long p);
AnnularDiagram f_loop();                 // the N = 0 generator f

DiagSum braid(int n, int j);           // b_j = q^{1/2} id + q^{-1/2} e_j
DiagSum braid_bar(int n, int j);       // bbar_j = q^{-1/2} id + q^{1/2} e_j
DiagSum braid_f(int n);                // F_n, expanded into 2^n diagrams
DiagSum braid_fbar(int n);

// -- automorphisms ------------------------------------------------------------

AnnularDiagram adjoint(const AnnularDiagram& d);
int sigma(const AnnularDiagram& d);  // parity sign: +1 / -1
AnnularDiagram reflect(const AnnularDiagram& d);

DiagSum adjoint(const DiagSum& s);
DiagSum reflect(const DiagSum& s);

// -- enumeration --------------------------------------------------------------

// All increasing tuples of length n/2 - b/2 in {1..n}: the set I_{b/2}(n).
std::vector<std::vector<int>> opener_tuples(int n, int b);

std::vector<AnnularDiagram> enumerate_basis(int n_out, int n_in, int b,
                                            const std::vector<long>& l_range);

}  // namespace peritl
