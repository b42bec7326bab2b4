#pragma once

#include "peritl/families.hpp"

namespace peritl {

// The isomorphism witnesses of the transformation table, realized as
// basis-indexed state maps between a source and a target family.
enum class WitnessKind {
    Wk_minus,
    Wk_reflect,
    Wkx_minus,
    Wkx_reflect,
    V_reflect,
    RSOS_minus,
    RSOS_reflect,
    XXZ_minus,
    XXZ_reflect,
};

WitnessKind parse_witness_kind(const std::string& name);
const char* witness_kind_str(WitnessKind k);

class IsoWitness {
  public:
    IsoWitness(WitnessKind kind, FamilyPtr base);

    WitnessKind kind() const { return kind_; }
    const FamilyPtr& source() const { return source_; }
    const FamilyPtr& target() const { return target_; }

    // The state-level table at size n (built on demand). For the solved
    // XXZ reflect witness the table is denominator-cleared: the actual map
    // is table / denom(n).
    const std::map<BState, ModuleVector>& table(int n);
    Scalar denom(int n);
    ModuleVector apply(int n, const ModuleVector& v);  // cleared-form image

    // Test hook: flips one sign in the next state image produced.
    void sabotage() { sabotaged_ = true; }

    // Image of a single basis state (handles states outside enumeration
    // bounds, e.g. large Wk windings).
    ModuleVector map_state(int n, const BState& s);

  private:
    void build(int n);

    WitnessKind kind_;
    FamilyPtr base_, source_, target_;
    bool sabotaged_ = false;
    std::map<int, std::map<BState, ModuleVector>> tables_;
    std::map<int, Scalar> denoms_;
};

struct IntertwinerReport {
    bool pass = true;
    long checked = 0;
    double max_numeric_dev = 0.0;
    std::string first_failure;
    bool bijective = true;
};

// Checks phi(c_j u) = c_j phi(u) and phi(c^dag_j u) = c^dag_j phi(u) for all
// generators, basis states and sizes up to n_max; also probes bijectivity of
// each size table.
IntertwinerReport verify_intertwiner(IsoWitness& w, int n_max, double tol = 1e-9);

// Right action u^dag . lambda = (lambda^dag u)^dag of the dual family.
ModuleVector act_dual_right(const AnnularDiagram& lambda, const ModuleVector& v);

}  // namespace peritl
