#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "periodmap/cech_ks.hpp"
#include "periodmap/generators.hpp"

namespace periodmap {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // empty when passing; exact residual summary otherwise
};

struct InstanceReport {
    uint64_t seed = 0;
    std::string spec_desc;  // reproducer: the generator recipe in words
    std::vector<CheckResult> checks;
};

struct SuiteReport {
    std::string suite;
    bool all_pass = true;
    std::vector<InstanceReport> instances;
    std::vector<std::string> conventions;
    std::vector<std::string> assumptions;  // e.g. global vector fields present
    long elapsed_ms = 0;                   // informational; kept out of canonical serialization

    void add(InstanceReport inst) {
        for (const CheckResult& c : inst.checks) all_pass = all_pass && c.pass;
        instances.push_back(std::move(inst));
    }
};

// Pinned sign conventions, surfaced in every report.
std::vector<std::string> convention_notes();

/* Lemma-level suite over generated flat transversal connections: symmetry of
 * the second differential, agreement of the graded Archimedean differential
 * with the first differential, factorization of the second differential
 * through its graded block, and the filtration shift bound.  One deliberately
 * broken input per run must be rejected at its precondition. */
SuiteReport suite_lemmas(const std::vector<uint64_t>& seeds);

// The congruence II = d2psi_bar - dpsi_bar o dpsi_bar modulo im(dPhi),
// including the pinned nilpotent-plus-t-perturbation family.
SuiteReport suite_prop1(const std::vector<uint64_t>& seeds);

enum class ModelChoice { annulus, abelian };

/* Second-differential suite: representatives of second classes in the image
 * of kappa1 give exactly zero cosets; coset invariance under boundary moves
 * of the representative pair; equal classes modulo im(kappa1) give equal
 * cosets. */
SuiteReport suite_theorem2(ModelChoice which, const std::vector<uint64_t>& seeds);

/* First-order-determined invariants: pairs of one-forms with the same
 * first-order jet but different second-order coefficients realize identical
 * graded second differentials, second differentials of the filtered
 * structure, and second fundamental forms; the contraction term of the
 * cochain formula lies in F_ar^{-1}. */
SuiteReport suite_theorem5_6(ModelChoice which, const std::vector<uint64_t>& seeds);

// Griffiths-type cross-check on the gluing model: the realized first
// differential equals cup-contraction with kappa1 (also part of acceptance).
SuiteReport suite_theorem1(ModelChoice which, const std::vector<uint64_t>& seeds);

SuiteReport suite_all(const std::vector<uint64_t>& seeds);

}  // namespace periodmap
