#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peritl/diagram.hpp"
#include "peritl/word.hpp"

namespace peritl {

enum class FamilyKind { Wk, Wkx, Vacuum, XXZ, RSOS, Fused, LDiag };

enum class TransformTag { minus, reflect };

// Twist parameter shape: +/- var^{+/-1}. Lets the transformed partners
// W_{k,-x}, W_{k,x^{-1}}, X_{m,-u}, X_{m,u^{-1}} be first-class descriptors.
struct Twist {
    Var var = Var::x1;
    bool negated = false;
    bool inverted = false;

    friend auto operator<=>(const Twist&, const Twist&) = default;

    Scalar factor(long power) const {
        long p = inverted ? -power : power;
        Scalar v = Scalar::var(var).pow(p);
        if (negated && (power % 2 != 0)) v = -v;
        return v;
    }
    // alpha = x + x^{-1}, the k = 0 non-contractible loop weight
    Scalar alpha() const {
        Scalar x = factor(1);
        return x + x.inv();
    }
};

enum class ADE { A, D, E6, E7, E8 };

struct RSOSModel {
    ADE series = ADE::A;
    int rank = 3;        // n of A_n / D_n; 6, 7, 8 for the E types
    int mu = 1;          // exponent index, 1-based, ordered as in Table 1
    std::vector<int> K;  // node permutation, 0-indexed; empty = identity

    friend auto operator<=>(const RSOSModel&, const RSOSModel&) = default;

    int nodes() const;
    int coxeter() const;
    std::vector<int> exponents() const;
    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> perm() const;  // K, identity-filled
    void validate() const;
    // Eigenvector S_{a,mu} for beta_mu = 2 cos(pi m_mu / coxeter); only
    // defined (all entries nonzero) when gcd(coxeter, m_mu) = 1.
    std::vector<double> eigenvector() const;
    double beta_mu() const;
    bool color_preserving() const;  // K preserves the bipartite 2-coloring
    std::vector<int> coloring() const;  // theta(a) = +/-1, node 0 black
};

struct FamilyDesc;
using FamilyPtr = std::shared_ptr<const FamilyDesc>;

struct FamilyDesc {
    FamilyKind kind = FamilyKind::Vacuum;
    int k2 = 0;             // Wk / Wkx: the 2k bridge count
    Twist twist;            // Wkx / XXZ
    std::optional<int> m2;  // XXZ: 2m (magnetisation sector), nullopt = full chain
    RSOSModel rsos;
    std::vector<TransformTag> tags;  // outermost transform first
    FamilyPtr left, right;           // Fused factors

    int parity() const;
    bool admissible(int n) const { return n >= 0 && n % 2 == parity(); }
    bool numeric() const {
        if (kind == FamilyKind::RSOS) return true;
        if (kind == FamilyKind::Fused) return left->numeric() || right->numeric();
        return false;
    }
    std::string str() const;
};

bool same_family(const FamilyDesc& a, const FamilyDesc& b);

FamilyPtr make_wk(int k2);
FamilyPtr make_wkx(int k2, Twist t = {});
FamilyPtr make_vacuum();
FamilyPtr make_xxz(std::optional<int> m2, Twist t = {Var::u, false, false});
FamilyPtr make_rsos(RSOSModel model);
FamilyPtr make_fused(FamilyPtr left, FamilyPtr right);
// The diagram family L_N: modules L(n, base_n) with states the canonical
// basis diagrams (used by the two-hole cross-checks).
FamilyPtr make_ldiag(int base_n);
FamilyPtr with_transform(FamilyPtr base, TransformTag tag);

FamilyPtr parse_family(const std::string& text);

// -- basis states -------------------------------------------------------------

struct FusedCanon;

// Basis state of one module. Payload per kind:
//   Wk:     ints = arch tuple, wind = Omega power
//   Wkx:    ints = arch tuple
//   Vacuum: ints = chord partner array (1-indexed, ints[0] unused)
//   XXZ:    spins over {+1,-1}
//   RSOS:   ints = node path a_0..a_N (0-indexed nodes)
//   Fused:  canonical spanning state c_0^n . (u (x) v)
//   LDiag:  ints = [b] ++ out tuple, wind = winding, of a diagram in L(n, base_n)
struct BState {
    FamilyKind kind = FamilyKind::Vacuum;
    std::vector<int> ints;
    long wind = 0;
    std::vector<int8_t> spins;
    std::shared_ptr<const FusedCanon> fused;

    std::string str() const;
};

std::strong_ordering operator<=>(const BState& a, const BState& b);
bool operator==(const BState& a, const BState& b);

struct FusedCanon {
    int n = 0;        // c_0 power
    int na = 0, nb = 0;
    BState u, v;
};

std::strong_ordering operator<=>(const FusedCanon& a, const FusedCanon& b);

BState wk_state(std::vector<int> tuple, long wind);
BState wkx_state(std::vector<int> tuple);
BState vac_state(std::vector<int> match);
BState xxz_state(std::vector<int8_t> spins);
BState rsos_state(std::vector<int> path);
BState fused_bstate(const FusedCanon& fc);
BState ldiag_state(const AnnularDiagram& d);
AnnularDiagram ldiag_decode(const FamilyPtr& fam, int n, const BState& s);

// -- module vectors -----------------------------------------------------------

struct ModuleVector {
    FamilyPtr family;
    int n = 0;
    std::map<BState, Scalar> terms;

    void add(const BState& s, const Scalar& c);
    bool is_zero() const { return terms.empty(); }
    ModuleVector& operator+=(const ModuleVector& o);
    ModuleVector operator*(const Scalar& c) const;
    ModuleVector operator-(const ModuleVector& o) const;
    // exact equality, or entrywise numeric tolerance for numeric families
    bool eq(const ModuleVector& o, double tol = 1e-9) const;
    double max_dev(const ModuleVector& o) const;
};

ModuleVector zero_vector(FamilyPtr fam, int n);
ModuleVector unit_vector(FamilyPtr fam, int n, BState s);

// Complete basis of M(N); Wk and Fused need bounds (enumeration only).
struct BasisBounds {
    long wind = 2;       // |winding| cap for Wk
    int fused_cut = 8;   // N_a, N_b cap inside fused states
};
std::vector<BState> basis(const FamilyPtr& fam, int n, const BasisBounds& bounds = {});

// dim M(N); nullopt marks the infinite-dimensional kinds.
std::optional<long> dimension(const FamilyPtr& fam, int n);

// c_{n,j}: M(n) -> M(n-2) and c^dag_{n,j}: M(n-2) -> M(n).
ModuleVector act_c(const FamilyPtr& fam, int n, int j, const BState& s);
ModuleVector act_cdag(const FamilyPtr& fam, int n, int j, const BState& s);
ModuleVector act_c(const FamilyPtr& fam, int n, int j, const ModuleVector& v);
ModuleVector act_cdag(const FamilyPtr& fam, int n, int j, const ModuleVector& v);

// Word action (letters applied rightmost first).
ModuleVector act_word(const Word& w, const ModuleVector& v);

ModuleVector act_diagram(const AnnularDiagram& d, const ModuleVector& v);
ModuleVector act_diagram(const DiagSum& sum, const ModuleVector& v);

Scalar scalar_one_for(const FamilyPtr& fam);

// Numeric specialization of the formal variables for a numeric family
// (RSOS pins s so that beta evaluates to beta_mu).
Assignment family_assignment(const FamilyPtr& fam);
Scalar to_family_scalar(const FamilyPtr& fam, const Scalar& c);

}  // namespace peritl
