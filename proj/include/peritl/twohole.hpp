#pragma once

#include "peritl/fusion.hpp"

namespace peritl {

// Canonical data of a diagram with two holes: the outer one-hole word in
// canonical form (its out-tuple, winding and a pure c_0 block that plays the
// role of the connector), and a dagger-free canonical word per subsystem.
struct TwoHoleForm {
    // outer zone: (w^{s_out}_{j_out})^dag Omega^{l_out} (c_0)^{conn}
    int kc2 = 0;
    long l_out = 0;
    int s_out = 0;
    std::vector<int> j_out;
    int conn = 0;  // c_0 power between the outer zone and the subsystems

    // subsystems: Omega^{l} (c_0)^{s} c_{J...}
    int ka2 = 0, kb2 = 0;
    long l_a = 0, l_b = 0;
    int s_a = 0, s_b = 0;
    std::vector<int> j_a, j_b;

    long beta_pow = 0;
    int n_out = 0, n_a = 0, n_b = 0;

    Scalar scalar() const { return Scalar::beta().pow(beta_pow); }
    bool same_form(const TwoHoleForm& o) const {
        return kc2 == o.kc2 && l_out == o.l_out && s_out == o.s_out && j_out == o.j_out &&
               conn == o.conn && ka2 == o.ka2 && kb2 == o.kb2 && l_a == o.l_a && l_b == o.l_b &&
               s_a == o.s_a && s_b == o.s_b && j_a == o.j_a && j_b == o.j_b && n_out == o.n_out &&
               n_a == o.n_a && n_b == o.n_b;
    }
    std::string str() const;
};

// Reduction of lambda (lambda_a (x) lambda_b) to the canonical two-hole form.
TwoHoleForm two_hole_normal_form(const AnnularDiagram& lambda, const AnnularDiagram& lambda_a,
                                 const AnnularDiagram& lambda_b);

// Cross-check helper: the same element reduced in the fused module
// (L_{n_a} x L_{n_b})(N) of diagram families.
ModuleVector two_hole_via_fusion(const AnnularDiagram& lambda, const AnnularDiagram& lambda_a,
                                 const AnnularDiagram& lambda_b);

}  // namespace peritl
