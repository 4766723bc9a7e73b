#pragma once

#include "gfcalc/error.hpp"
#include "gfcalc/interval.hpp"
#include "gfcalc/kernels.hpp"

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gfcalc {

// Boxes of `region` whose endpoints lie on the dyadic grid of step 2r/2^level.
class BaseIndex {
public:
    BaseIndex() = default;
    BaseIndex(Interval region, unsigned level);
    static BaseIndex standard(std::size_t n, unsigned level = 5);

    const Interval& region() const { return region_; }
    unsigned level() const { return level_; }
    std::size_t dimension() const { return region_.dimension(); }
    std::vector<Rational> grid(std::size_t k) const;

    bool is_base(const Interval& i) const;
    std::vector<Interval> enumerate() const;
    // Base intervals contained in the union of `opens`.
    std::vector<Interval> enumerate_within(const std::vector<Interval>& opens) const;

    friend bool operator==(const BaseIndex&, const BaseIndex&) = default;

private:
    Interval region_;
    unsigned level_ = 0;
};

// Is the open box j contained in the union of the open boxes `opens`?
bool covered_by(const Interval& j, const std::vector<Interval>& opens);

template <class S>
struct FamilyMember {
    Interval domain;
    S section;
};

template <class S>
using CompatibleFamily = std::vector<FamilyMember<S>>;

template <class S>
std::vector<Interval> cover_of(const CompatibleFamily<S>& fam) {
    std::vector<Interval> c;
    c.reserve(fam.size());
    for (const auto& m : fam) c.push_back(m.domain);
    return c;
}

enum class GlueStatus { decided, undecided, absent };

template <class S>
struct GlueOutcome {
    GlueStatus status = GlueStatus::absent;
    std::optional<S> section;
    std::string note;
};

template <class P>
concept Presheaf = requires(const P& p, const typename P::Section& s, const Interval& i, const Rational& c,
                            const CompatibleFamily<typename P::Section>& fam) {
    { p.restrict(s, i) } -> std::same_as<typename P::Section>;
    { p.equal(s, s) } -> std::convertible_to<bool>;
    { p.add(s, s) } -> std::same_as<typename P::Section>;
    { p.scale(c, s) } -> std::same_as<typename P::Section>;
    { p.zero(i) } -> std::same_as<typename P::Section>;
    { p.construct(i, fam) } -> std::same_as<GlueOutcome<typename P::Section>>;
};

template <Presheaf P>
bool is_compatible(const P& p, const CompatibleFamily<typename P::Section>& fam) {
    for (std::size_t a = 0; a < fam.size(); ++a)
        for (std::size_t b = a + 1; b < fam.size(); ++b) {
            auto k = fam[a].domain.intersect(fam[b].domain);
            if (!k) continue;
            if (!p.equal(p.restrict(fam[a].section, *k), p.restrict(fam[b].section, *k))) return false;
        }
    return true;
}

// Checking on I ∩ J suffices: any base K inside it is reached by further restriction.
template <Presheaf P>
bool locally_equal(const P& p, const Interval& j, const typename P::Section& s,
                   const CompatibleFamily<typename P::Section>& fam) {
    for (const auto& m : fam) {
        auto k = m.domain.intersect(j);
        if (!k) continue;
        if (!p.equal(p.restrict(s, *k), p.restrict(m.section, *k))) return false;
    }
    return true;
}

// Compatible family together with its lazily computed maximal completion over the base.
// Copies share the completion cache, which is guarded by a mutex.
template <Presheaf P>
class MaximalFamily {
public:
    using Section = typename P::Section;
    using Entry = GlueOutcome<Section>;

    MaximalFamily() = default;
    MaximalFamily(P presheaf, BaseIndex base, CompatibleFamily<Section> generators, bool check = true)
        : state_(std::make_shared<State>()) {
        state_->presheaf = std::move(presheaf);
        state_->base = std::move(base);
        for (const auto& m : generators)
            if (!state_->base.is_base(m.domain))
                throw Error(ErrorCode::invalid_argument, m.domain.to_string() + " is not a base interval");
        if (check && !is_compatible(state_->presheaf, generators))
            throw Error(ErrorCode::incompatible_family, "family sections disagree on an overlap");
        state_->generators = std::move(generators);
        state_->cover = cover_of(state_->generators);
    }

    const P& presheaf() const { return state_->presheaf; }
    const BaseIndex& base() const { return state_->base; }
    const CompatibleFamily<Section>& generators() const { return state_->generators; }
    const std::vector<Interval>& cover() const { return state_->cover; }

    bool covers(const Interval& j) const { return covered_by(j, state_->cover); }

    Entry lookup(const Interval& j) const {
        {
            std::lock_guard<std::mutex> lock(state_->mutex);
            auto it = state_->memo.find(j);
            if (it != state_->memo.end()) return it->second;
        }
        Entry e = compute(j);
        std::lock_guard<std::mutex> lock(state_->mutex);
        return state_->memo.emplace(j, std::move(e)).first->second;
    }

    // Fills the cache for every base interval inside the cover.
    void complete(kernels::Exec exec = kernels::Exec::parallel) const {
        auto candidates = state_->base.enumerate_within(state_->cover);
        kernels::failing_cases(candidates.size(), [&](std::size_t i) {
            lookup(candidates[i]);
            return true;
        }, exec);
    }

    std::vector<std::pair<Interval, Section>> decided() const {
        complete();
        std::vector<std::pair<Interval, Section>> out;
        std::lock_guard<std::mutex> lock(state_->mutex);
        for (const auto& [j, e] : state_->memo)
            if (e.status == GlueStatus::decided) out.emplace_back(j, *e.section);
        return out;
    }

    std::vector<Interval> undecided() const {
        complete();
        std::vector<Interval> out;
        std::lock_guard<std::mutex> lock(state_->mutex);
        for (const auto& [j, e] : state_->memo)
            if (e.status == GlueStatus::undecided) out.push_back(j);
        return out;
    }

private:
    Entry compute(const Interval& j) const {
        Entry e;
        if (!state_->base.is_base(j)) throw Error(ErrorCode::invalid_argument, j.to_string() + " is not a base interval");
        if (!covers(j)) return e;
        CompatibleFamily<Section> meeting;
        for (const auto& m : state_->generators)
            if (m.domain.intersect(j)) meeting.push_back(m);
        e = state_->presheaf.construct(j, meeting);
        if (e.status == GlueStatus::decided && !locally_equal(state_->presheaf, j, *e.section, state_->generators)) {
            e.status = GlueStatus::undecided;
            e.section.reset();
            e.note = "constructed section is not locally equal to the family";
        }
        return e;
    }

    struct State {
        P presheaf;
        BaseIndex base;
        CompatibleFamily<Section> generators;
        std::vector<Interval> cover;
        mutable std::mutex mutex;
        std::map<Interval, Entry> memo;
    };
    std::shared_ptr<State> state_;
};

template <Presheaf P>
using SheafSection = MaximalFamily<P>;

template <Presheaf P>
SheafSection<P> eta_embed(const P& p, const BaseIndex& base, const Interval& i, const typename P::Section& s) {
    return SheafSection<P>(p, base, {{i, s}}, false);
}

template <Presheaf P>
bool same_support(const SheafSection<P>& x, const SheafSection<P>& y) {
    for (const auto& i : x.cover())
        if (!y.covers(i)) return false;
    for (const auto& i : y.cover())
        if (!x.covers(i)) return false;
    return true;
}

// Equal maximal families: same open set and every generator of one is locally equal to the other.
template <Presheaf P>
bool section_equal(const SheafSection<P>& x, const SheafSection<P>& y) {
    if (!same_support(x, y)) return false;
    for (const auto& m : x.generators())
        if (!locally_equal(x.presheaf(), m.domain, m.section, y.generators())) return false;
    for (const auto& m : y.generators())
        if (!locally_equal(y.presheaf(), m.domain, m.section, x.generators())) return false;
    return true;
}

template <Presheaf P, class Op>
SheafSection<P> section_combine(const SheafSection<P>& x, const SheafSection<P>& y, Op&& op) {
    if (!(x.base() == y.base())) throw Error(ErrorCode::domain_mismatch, "sections live over different bases");
    if (!same_support(x, y)) throw Error(ErrorCode::domain_mismatch, "sections live on different open sets");
    CompatibleFamily<typename P::Section> gens;
    for (const auto& a : x.generators())
        for (const auto& b : y.generators()) {
            auto k = a.domain.intersect(b.domain);
            if (!k) continue;
            gens.push_back({*k, op(x.presheaf().restrict(a.section, *k), y.presheaf().restrict(b.section, *k))});
        }
    if (gens.empty()) throw Error(ErrorCode::domain_mismatch, "covers with empty common refinement");
    return SheafSection<P>(x.presheaf(), x.base(), std::move(gens), false);
}

template <Presheaf P>
SheafSection<P> section_add(const SheafSection<P>& x, const SheafSection<P>& y) {
    const P& p = x.presheaf();
    return section_combine(x, y, [&](const auto& a, const auto& b) { return p.add(a, b); });
}

template <Presheaf P>
SheafSection<P> section_scale(const Rational& c, const SheafSection<P>& x) {
    CompatibleFamily<typename P::Section> gens;
    for (const auto& m : x.generators()) gens.push_back({m.domain, x.presheaf().scale(c, m.section)});
    return SheafSection<P>(x.presheaf(), x.base(), std::move(gens), false);
}

// Restriction to the open set given as a finite union of base intervals.
template <Presheaf P>
SheafSection<P> section_restrict(const SheafSection<P>& x, const std::vector<Interval>& v) {
    CompatibleFamily<typename P::Section> gens;
    for (const auto& piece : v) {
        if (!x.covers(piece))
            throw Error(ErrorCode::domain_mismatch, piece.to_string() + " is not inside the section's open set");
        for (const auto& m : x.generators()) {
            auto k = m.domain.intersect(piece);
            if (k) gens.push_back({*k, x.presheaf().restrict(m.section, *k)});
        }
    }
    return SheafSection<P>(x.presheaf(), x.base(), std::move(gens), false);
}

// Lifts a presheaf morphism acting sectionwise.
template <Presheaf P, class F>
SheafSection<P> section_map(const SheafSection<P>& x, F&& f) {
    CompatibleFamily<typename P::Section> gens;
    for (const auto& m : x.generators()) gens.push_back({m.domain, f(m.section)});
    return SheafSection<P>(x.presheaf(), x.base(), std::move(gens), false);
}

// Glues sections that agree on overlaps into one section on the union of their open sets.
template <Presheaf P>
SheafSection<P> glue(const std::vector<SheafSection<P>>& parts) {
    if (parts.empty()) throw Error(ErrorCode::invalid_argument, "nothing to glue");
    CompatibleFamily<typename P::Section> gens;
    for (const auto& x : parts) {
        if (!(x.base() == parts.front().base())) throw Error(ErrorCode::domain_mismatch, "parts over different bases");
        gens.insert(gens.end(), x.generators().begin(), x.generators().end());
    }
    return SheafSection<P>(parts.front().presheaf(), parts.front().base(), std::move(gens), true);
}

}  // namespace gfcalc
