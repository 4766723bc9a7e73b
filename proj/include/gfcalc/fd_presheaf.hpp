#pragma once

#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/sheaf.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gfcalc {

// The presheaf I -> D'_f(I) of formal distributions on base intervals.
struct DistributionPresheaf {
    using Section = FormalDistribution;

    kernels::Exec exec = kernels::Exec::parallel;

    Section restrict(const Section& s, const Interval& j) const { return fd_restrict(s, j); }
    bool equal(const Section& a, const Section& b) const { return fd_equal(a, b, exec); }
    Section add(const Section& a, const Section& b) const { return fd_add(a, b); }
    Section scale(const Rational& c, const Section& s) const { return fd_scale(c, s); }
    Section zero(const Interval& i) const { return fd_zero(i); }

    // Builds a section on j from the members meeting j: a chain of slabs along one axis is raised
    // to a common order and patched overlap by overlap with polynomial corrections.
    GlueOutcome<Section> construct(const Interval& j, const CompatibleFamily<Section>& members) const;
};

using DistributionSection = SheafSection<DistributionPresheaf>;

struct LawViolation {
    std::string law;
    std::string detail;
};

struct LawReport {
    std::size_t cases = 0;
    std::map<std::string, std::size_t> checks;  // law -> number of checks performed
    std::vector<LawViolation> violations;
    bool passed() const { return violations.empty(); }
};

struct SheafLawOptions {
    std::size_t cases = 200;
    unsigned level = 5;
    std::uint64_t seed = 1;
    kernels::Exec exec = kernels::Exec::parallel;
};

// Randomized locality, gluing, glue/restrict and glue/morphism checks on 1-D covers.
LawReport sheaf_laws_check(const SheafLawOptions& options);

// Restriction of eta commutes with eta of the restriction on random sections.
LawReport eta_naturality_check(const SheafLawOptions& options);

}  // namespace gfcalc
