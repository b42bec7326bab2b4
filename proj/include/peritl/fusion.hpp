#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "peritl/families.hpp"

namespace peritl {

// One formal term lambda . (u (x) v) of the free layer, with module vectors
// in the tensor slots so relation generators fit in a single term list.
struct RawTerm {
    AnnularDiagram lambda;  // in L(N, na + nb)
    ModuleVector u, v;
    Scalar coeff = Scalar::one();
};
using RawExpr = std::vector<RawTerm>;

RawTerm raw_term(const AnnularDiagram& lambda, const ModuleVector& u, const ModuleVector& v,
                 const Scalar& coeff);

// Deterministic reduction to the canonical spanning combination
// sum c . c_0^n (u (x) v) with 0 <= n <= min(na, nb); the result is a
// module vector over the fused family.
ModuleVector reduce_raw(const FamilyPtr& fused, const RawExpr& expr);
ModuleVector reduce_term(const FamilyPtr& fused, const RawTerm& t);

// Prepend a diagram (or weighted sum) to an already-reduced expression.
ModuleVector act_fused(const AnnularDiagram& lambda, const ModuleVector& e);
ModuleVector act_fused(const DiagSum& sum, const ModuleVector& e);

// The commuting endomorphisms of Prop-style F maps.
enum class EndoSlot { a, b, ab };
ModuleVector endo_F(EndoSlot slot, bool barred, const ModuleVector& e);

// Relation generators X^alpha_j(u, v).
struct XGen {
    char alpha = 'a';
    int j = 0;
    int n = 0;  // boundary size of the generator's layer element
    RawExpr expr;
};
std::vector<XGen> relation_generators(const FamilyPtr& ma, const FamilyPtr& mb, int na, int nb);

// -- witness maps ---------------------------------------------------------------

enum class FusionWitness {
    swap_factors,
    vacuum_phi,
    vacuum_psi,
    minus_sign,
    reflect_pair,
    dual_phi,
    dual_psi,
    assoc_phi,
    assoc_psi,
};
FusionWitness parse_fusion_witness(const std::string& name);

enum class CheckOutcome { pass, fail, inconclusive };
const char* outcome_str(CheckOutcome o);

// Module-level zero test for a reduced expression: pass when the combination
// is formally zero, or when it lies in the harvested relation row space at
// two independent (prime, specialization) probes.
CheckOutcome module_zero(const FamilyPtr& fused, const ModuleVector& diff, int harvest_cut);

// Applies the named witness map to every relation generator of the relevant
// module pair(s) at sizes <= size_cap and reduces; pass iff all images vanish.
struct AnnihilationReport {
    CheckOutcome outcome = CheckOutcome::pass;
    long checked = 0;
    std::string first_failure;
};
AnnihilationReport check_annihilates(FusionWitness kind, const FamilyPtr& ma, const FamilyPtr& mb,
                                     int size_cap);

// Explicit maps used by check_annihilates and the tests.
ModuleVector swap_map(const FamilyPtr& ma, const FamilyPtr& mb, const RawExpr& e);
ModuleVector minus_map(const FamilyPtr& ma_base, const FamilyPtr& mb, const RawExpr& e);
ModuleVector reflect_map(const FamilyPtr& ma_base, const FamilyPtr& mb_base, const RawExpr& e);
ModuleVector vacuum_phi(const FamilyPtr& m, const RawExpr& e);
ModuleVector vacuum_psi_phi_roundtrip(const FamilyPtr& m, int n, const BState& u);

// rho / r of the associativity construction: letterwise image of a one-hole
// word, sized against a second factor of width nb.
std::pair<Word, int> rho_r(const Word& lambda, int nb);

// -- triple fusion ---------------------------------------------------------------

// Triple states are reduced through the nested module ((Ma x Mb) x Mc).
struct TripleTerm {
    AnnularDiagram lambda;  // in L(N, na + nb + nc)
    ModuleVector u, v, w;
    Scalar coeff = Scalar::one();
};
using TripleExpr = std::vector<TripleTerm>;

FamilyPtr nested_family(const FamilyPtr& ma, const FamilyPtr& mb, const FamilyPtr& mc);
ModuleVector triple_reduce(const FamilyPtr& nested, const TripleExpr& e);

// Associativity instance checks (the phi(X1) = 0 and phi(X2) = 0 identities),
// verified through triple_reduce for all legal j at the given sizes.
struct AssocReport {
    bool pass = true;
    long checked = 0;
    std::string first_failure;
};
AssocReport check_associativity_instances(const FamilyPtr& ma, const FamilyPtr& mb,
                                          const FamilyPtr& mc, int size_cap, int word_len);

// -- generic-rank dimension estimation --------------------------------------------

struct HarvestReport {
    long states = 0;
    long relations = 0;
    long rank = 0;
    long dim_estimate = 0;
    bool stable = false;
    std::vector<long> estimates;  // one per cutoff step
    std::vector<int> cutoffs;
    uint64_t seed = 0;
};

// Enumerates canonical fused states with na + nb <= cutoff, harvests relation
// rows, and computes the rank at a seeded rational specialization over a
// 61-bit prime field. Repeats at cutoff+2 and cutoff+4 for the stability flag.
HarvestReport harvest_and_rank(const FamilyPtr& ma, const FamilyPtr& mb, int n, int cutoff,
                               uint64_t seed, int increments = 2);

}  // namespace peritl
