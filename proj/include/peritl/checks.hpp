#pragma once

#include <functional>
#include <string>
#include <vector>

#include "peritl/families.hpp"

namespace peritl {

struct SuiteReport {
    bool pass = true;
    long checked = 0;
    double max_dev = 0.0;  // numeric families only
    std::string first_failure;

    void fail(const std::string& what) {
        if (pass) first_failure = what;
        pass = false;
    }
};

// Every instance of the defining relations under diagrammatic composition,
// exact scalars, for all base sizes N <= nmax.
SuiteReport check_relations_diagram(int nmax);

// The same relations as operator identities on a family's modules, checked
// on every basis state with every composite size <= nmax.
SuiteReport check_relations_family(const FamilyPtr& fam, int nmax, double tol = 1e-9);

// Omega^N lambda = lambda Omega^{N'} on sampled diagrams.
SuiteReport check_omega_centrality(int nmax, int samples, uint64_t seed);

// Push-through relations of the braid transfer matrix.
SuiteReport check_push_through(int nmax);

// Worker count for the suite loops (PERITL_THREADS, default: hardware).
int worker_count();

}  // namespace peritl
