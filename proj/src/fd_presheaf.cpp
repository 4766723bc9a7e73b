#include "gfcalc/fd_presheaf.hpp"

#include "gfcalc/random_objects.hpp"

#include <algorithm>
#include <mutex>

namespace gfcalc {

namespace {

// Members restricted to j whose cross-section (all axes but `axis`) is all of j's.
std::vector<FormalDistribution> slabs_along(const Interval& j, const CompatibleFamily<FormalDistribution>& members,
                                            std::size_t axis) {
    std::vector<FormalDistribution> out;
    for (const auto& m : members) {
        auto k = m.domain.intersect(j);
        if (!k) continue;
        bool spans = true;
        for (std::size_t a = 0; a < j.dimension(); ++a)
            if (a != axis && (k->lo(a) != j.lo(a) || k->hi(a) != j.hi(a))) spans = false;
        if (spans) out.push_back(fd_restrict(m.section, *k));
    }
    return out;
}

// Greedy chain of slabs covering j along `axis`; consecutive members overlap with positive length.
std::optional<std::vector<FormalDistribution>> chain_along(const Interval& j, std::vector<FormalDistribution> slabs,
                                                           std::size_t axis) {
    std::sort(slabs.begin(), slabs.end(), [&](const auto& a, const auto& b) {
        return a.domain().lo(axis) < b.domain().lo(axis);
    });
    std::vector<FormalDistribution> chain;
    Rational reach = j.lo(axis);
    bool first = true;
    while (reach < j.hi(axis)) {
        const FormalDistribution* best = nullptr;
        for (const auto& s : slabs) {
            const bool starts_ok = first ? s.domain().lo(axis) == reach : s.domain().lo(axis) < reach;
            if (!starts_ok || !(s.domain().hi(axis) > reach)) continue;
            if (!best || s.domain().hi(axis) > best->domain().hi(axis)) best = &s;
        }
        if (!best) return std::nullopt;
        chain.push_back(*best);
        reach = best->domain().hi(axis);
        first = false;
    }
    return chain;
}

std::optional<FormalDistribution> patch_chain(const std::vector<FormalDistribution>& chain, std::size_t axis,
                                              kernels::Exec exec, std::string& note) {
    MultiIndex m = chain.front().order();
    for (const auto& s : chain) m = max(m, s.order());
    PiecewisePoly acc = chain.front().rep().primitive(m - chain.front().order());
    for (std::size_t i = 1; i < chain.size(); ++i) {
        PiecewisePoly next = chain[i].rep().primitive(m - chain[i].order());
        std::vector<Rational> lo = next.domain().center(), hi = lo;
        for (std::size_t a = 0; a < lo.size(); ++a) {
            lo[a] = next.domain().lo(a);
            hi[a] = next.domain().hi(a);
        }
        lo[axis] = next.domain().lo(axis);
        hi[axis] = acc.domain().hi(axis);
        const Interval overlap = Interval::from_bounds(lo, hi);
        PiecewisePoly d = (acc.restrict_to(overlap) - next.restrict_to(overlap)).coarsened();
        if (!p_m_member(d, m, exec)) {
            note = "members disagree on " + overlap.to_string();
            throw Error(ErrorCode::incompatible_family, note);
        }
        if (!d.is_single_cell()) {
            note = "overlap correction on " + overlap.to_string() + " is not a single polynomial";
            return std::nullopt;
        }
        PiecewisePoly shifted = next + PiecewisePoly::polynomial(next.domain(), d.cells()[0]);
        acc = PiecewisePoly::splice(acc, shifted, axis, acc.domain().hi(axis));
    }
    return FormalDistribution(m, acc);
}

}  // namespace

GlueOutcome<FormalDistribution> DistributionPresheaf::construct(const Interval& j,
                                                               const CompatibleFamily<FormalDistribution>& members) const {
    GlueOutcome<FormalDistribution> out;
    for (const auto& mem : members) {
        if (mem.domain.contains(j)) {
            out.status = GlueStatus::decided;
            out.section = fd_restrict(mem.section, j);
            return out;
        }
    }
    std::string note;
    for (std::size_t axis = 0; axis < j.dimension(); ++axis) {
        auto chain = chain_along(j, slabs_along(j, members, axis), axis);
        if (!chain) {
            note = "no chain of slabs along axis " + std::to_string(axis + 1);
            continue;
        }
        auto s = patch_chain(*chain, axis, exec, note);
        if (s) {
            out.status = GlueStatus::decided;
            out.section = std::move(*s);
            return out;
        }
    }
    out.status = GlueStatus::undecided;
    out.note = note;
    return out;
}

namespace {

struct CaseResult {
    std::map<std::string, std::size_t> checks;
    std::vector<LawViolation> violations;

    void check(const std::string& law, bool ok, const std::string& detail) {
        ++checks[law];
        if (!ok) violations.push_back({law, detail});
    }
};

LawReport merge(std::vector<CaseResult>& results) {
    LawReport r;
    r.cases = results.size();
    for (auto& c : results) {
        for (const auto& [law, n] : c.checks) r.checks[law] += n;
        r.violations.insert(r.violations.end(), c.violations.begin(), c.violations.end());
    }
    return r;
}

CaseResult run_sheaf_case(std::size_t index, const SheafLawOptions& opt) {
    CaseResult res;
    Rng rng(opt.seed * 1000003ULL + index);
    const BaseIndex base = BaseIndex::standard(1, opt.level);
    DistributionPresheaf p;
    p.exec = kernels::Exec::serial;
    const std::string tag = "case " + std::to_string(index);
    try {
        const FormalDistribution global = random_distribution(rng, base.region(), 3, 3, 3, opt.level);
        const Interval u = random_base_interval(rng, base, 4);
        const auto cover = random_cover(rng, base, u);
        CompatibleFamily<FormalDistribution> family;
        for (const auto& ui : cover) family.push_back({ui, random_representative(rng, fd_restrict(global, ui))});
        const FormalDistribution on_u = fd_restrict(global, u);

        // Gluing: a compatible family glues to a section on u restricting back to each member.
        std::vector<DistributionSection> parts;
        for (const auto& m : family) parts.push_back(eta_embed(p, base, m.domain, m.section));
        const DistributionSection glued = glue(parts);
        auto entry = glued.lookup(u);
        res.check("gluing", entry.status == GlueStatus::decided && fd_equal(*entry.section, on_u, kernels::Exec::serial),
                  tag + ": glued section on " + u.to_string() + " differs from the global section");
        bool restrictions_ok = true;
        for (const auto& m : family)
            if (!section_equal(section_restrict(glued, {m.domain}), eta_embed(p, base, m.domain, m.section)))
                restrictions_ok = false;
        res.check("gluing", restrictions_ok, tag + ": glued section does not restrict to the family members");

        // Locality: sections agreeing on every member of a cover are equal; a perturbed one is not.
        const DistributionSection whole = eta_embed(p, base, u, on_u);
        bool agree = true;
        for (const auto& ui : cover)
            if (!section_equal(section_restrict(whole, {ui}), section_restrict(glued, {ui}))) agree = false;
        res.check("locality", !agree || section_equal(whole, glued), tag + ": locally equal sections differ");
        const Rational kink = random_base_subinterval(rng, base, u, 2).center()[0];
        PiecewisePoly bump = PiecewisePoly(u, {{kink}}, {Poly(1), Poly::variable(1, 0) - Poly::constant(1, kink)});
        const DistributionSection other =
            eta_embed(p, base, u, fd_add(on_u, FormalDistribution(MultiIndex{2}, bump)));
        bool other_agrees = true;
        for (const auto& ui : cover)
            if (!section_equal(section_restrict(other, {ui}), section_restrict(glued, {ui}))) other_agrees = false;
        res.check("locality", !other_agrees && !section_equal(other, glued),
                  tag + ": a delta perturbation went unnoticed");

        // Gluing commutes with restriction.
        const Interval v = random_base_subinterval(rng, base, u, 1);
        std::vector<DistributionSection> restricted_parts;
        for (const auto& m : family) {
            auto k = m.domain.intersect(v);
            if (k) restricted_parts.push_back(eta_embed(p, base, *k, fd_restrict(m.section, *k)));
        }
        const DistributionSection lhs = section_restrict(glued, {v});
        const DistributionSection rhs = glue(restricted_parts);
        auto le = lhs.lookup(v), re = rhs.lookup(v);
        res.check("glue_restrict",
                  section_equal(lhs, rhs) && le.status == GlueStatus::decided && re.status == GlueStatus::decided &&
                      fd_equal(*le.section, *re.section, kernels::Exec::serial),
                  tag + ": restricting the gluing to " + v.to_string() + " differs from gluing the restrictions");

        // Gluing commutes with the morphisms D and scaling.
        const Rational mu = random_rational(rng);
        auto derive = [](const FormalDistribution& s) { return fd_derive(s, 0); };
        auto scale = [mu](const FormalDistribution& s) { return fd_scale(mu, s); };
        for (int which = 0; which < 2; ++which) {
            std::vector<DistributionSection> mapped;
            for (const auto& m : family)
                mapped.push_back(eta_embed(p, base, m.domain, which == 0 ? derive(m.section) : scale(m.section)));
            const DistributionSection a = which == 0 ? section_map(glued, derive) : section_map(glued, scale);
            const DistributionSection b = glue(mapped);
            auto ae = a.lookup(u), be = b.lookup(u);
            const FormalDistribution expected = which == 0 ? derive(*entry.section) : scale(*entry.section);
            res.check("glue_morphism",
                      section_equal(a, b) && ae.status == GlueStatus::decided && be.status == GlueStatus::decided &&
                          fd_equal(*ae.section, expected, kernels::Exec::serial) &&
                          fd_equal(*be.section, expected, kernels::Exec::serial),
                      tag + (which == 0 ? ": D does not commute with gluing" : ": scaling does not commute with gluing"));
        }
    } catch (const std::exception& e) {
        res.check("exceptions", false, tag + ": " + e.what());
    }
    return res;
}

CaseResult run_eta_case(std::size_t index, const SheafLawOptions& opt) {
    CaseResult res;
    Rng rng(opt.seed * 7919ULL + index);
    const BaseIndex base = BaseIndex::standard(1, opt.level);
    DistributionPresheaf p;
    p.exec = kernels::Exec::serial;
    const std::string tag = "case " + std::to_string(index);
    try {
        const Interval i = random_base_interval(rng, base, 2);
        const FormalDistribution t = random_distribution(rng, i, 3, 3, 3, opt.level);
        const Interval j = random_base_subinterval(rng, base, i, 1);
        const DistributionSection lhs = section_restrict(eta_embed(p, base, i, t), {j});
        const DistributionSection rhs = eta_embed(p, base, j, fd_restrict(t, j));
        auto le = lhs.lookup(j);
        res.check("eta_naturality",
                  section_equal(lhs, rhs) && le.status == GlueStatus::decided &&
                      fd_equal(*le.section, fd_restrict(t, j), kernels::Exec::serial),
                  tag + ": restrict(eta(T)) != eta(restrict(T)) on " + j.to_string());
    } catch (const std::exception& e) {
        res.check("exceptions", false, tag + ": " + e.what());
    }
    return res;
}

template <class F>
LawReport run_cases(const SheafLawOptions& opt, F&& one) {
    std::vector<CaseResult> results(opt.cases);
    kernels::failing_cases(opt.cases, [&](std::size_t i) {
        results[i] = one(i, opt);
        return results[i].violations.empty();
    }, opt.exec);
    return merge(results);
}

}  // namespace

LawReport sheaf_laws_check(const SheafLawOptions& options) { return run_cases(options, run_sheaf_case); }

LawReport eta_naturality_check(const SheafLawOptions& options) { return run_cases(options, run_eta_case); }

}  // namespace gfcalc
