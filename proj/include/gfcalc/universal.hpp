#pragma once

#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"
#include "gfcalc/gsf.hpp"
#include "gfcalc/kernels.hpp"
#include "gfcalc/random_objects.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gfcalc {

inline constexpr const char* kFiniteBaseNote =
    "finite-base surrogate: the checks can falsify the universal statement but never prove it";

struct ConditionResult {
    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    std::vector<std::string> violations;  // serialized violating instances
};

struct CheckReport {
    std::string suite;
    std::vector<ConditionResult> conditions;
    std::vector<std::string> notes;
    bool passed() const;
    const ConditionResult* find(const std::string& name) const;
};

// Accumulates results per condition; safe to call from several threads.
class ReportBuilder {
public:
    explicit ReportBuilder(std::string suite);
    void declare(const std::string& condition);
    void pass(const std::string& condition);
    void fail(const std::string& condition, std::string instance);
    void record(const std::string& condition, bool ok, const std::function<std::string()>& instance);
    // Runs test; an exception counts as a violation and its message is appended to the instance.
    void check(const std::string& condition, const std::function<bool()>& test,
               const std::function<std::string()>& instance);
    void note(std::string n);
    CheckReport finish();

private:
    std::mutex mu_;
    CheckReport report_;
    std::map<std::string, std::size_t> index_;
    ConditionResult& slot(const std::string& condition);
};

// ---- Q-category laws -------------------------------------------------------

// An infinity class: the exponents a < 0 with rho^a among the infinities of a ring.
using InfinityClass = std::set<Rational>;

struct SetMap {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::map<Rational, Rational> map;
};

struct QInstances {
    std::vector<InfinityClass> objects;
    std::vector<SetMap> arrows;
};

// Q(i, src, dst): i is the inclusion of src into dst.
bool q_holds(const SetMap& arrow, const QInstances& in);
SetMap identity_arrow(std::size_t object, const QInstances& in);
SetMap compose(const SetMap& g, const SetMap& f);  // g after f

// Identity and composition closure of Q, plus a Q entry per supplied arrow.
CheckReport check_Q_laws(const QInstances& in);

// ---- desk-scale sections and solution triples ------------------------------

struct PsiOptions {
    unsigned level = 4;
    unsigned alpha_cap = 4;
    int d_cap = 5;
    std::uint64_t seed = 1;
    std::size_t stride = 1;      // keep every stride-th enumerated section
    std::size_t invariant_samples = 24;
    kernels::Exec exec = kernels::Exec::parallel;
};

// For each base interval of (-1,1) at `level` and each order 0..alpha_cap, one seeded section
// (alpha, f) with f continuous piecewise polynomial of degree <= d_cap.
std::vector<FormalDistribution> enumerate_sections(const PsiOptions& o);

template <class S>
struct SolutionTriple {
    std::string name;
    std::function<S(const PiecewisePoly&)> j;
    std::function<S(const S&, std::size_t)> delta;
    std::function<bool(const S&, const S&)> equal;
    std::function<S(const S&, const Interval&)> restrict;
    // Reference image of a section (identity, relabeling, embedding); optional.
    std::function<S(const FormalDistribution&)> expected;
};

template <class S>
struct MorphismWitness {
    std::string target;
    std::vector<FormalDistribution> sections;
    std::vector<S> images;
    bool preserves_embedding = true;
    bool preserves_derivatives = true;
    bool matches_expected = true;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool passed() const { return preserves_embedding && preserves_derivatives && matches_expected; }
};

enum class PsiVariant {
    standard,        // delta^alpha j(f) on the given representative
    representative,  // the same formula on an independent representative of each section
    scrambled,       // order lowered by one on sections of positive order
};

// Sections used for the invariant suite: C^1 pieces, P_m members and plain continuous pieces.
struct InvariantSamples {
    std::vector<PiecewisePoly> c1;
    std::vector<std::pair<PiecewisePoly, unsigned>> p_m;  // (P, m) with deg P < m
    std::vector<PiecewisePoly> continuous;
    std::vector<Interval> sub;  // a base subinterval of each continuous sample's domain
};
InvariantSamples invariant_samples(const PsiOptions& o);

namespace detail {

template <class S>
S delta_power(const SolutionTriple<S>& t, S s, unsigned k) {
    for (unsigned i = 0; i < k; ++i) s = t.delta(s, 0);
    return s;
}

inline std::string section_label(const FormalDistribution& t) { return to_string(t); }

}  // namespace detail

// Conditions of a solution triple on seeded samples: FTC compatibility, P_m annihilation,
// delta commutativity, naturality of j and functoriality of restriction.
template <class S>
CheckReport check_target(const SolutionTriple<S>& t, const PsiOptions& o) {
    ReportBuilder rb("target " + t.name);
    for (const char* c : {"compatibility", "p_m_annihilation", "delta_commutativity", "naturality",
                          "restriction_functorial"})
        rb.declare(c);
    const InvariantSamples s = invariant_samples(o);
    kernels::failing_cases(
        s.c1.size(),
        [&](std::size_t i) {
            const auto& f = s.c1[i];
            rb.check("compatibility", [&] { return t.equal(t.delta(t.j(f), 0), t.j(f.partial(0))); },
                      [&] { return "f = " + to_string(fd_lambda(f)); });
            return true;
        },
        o.exec);
    kernels::failing_cases(
        s.p_m.size(),
        [&](std::size_t i) {
            const auto& [p, m] = s.p_m[i];
            rb.check(
                "p_m_annihilation",
                [&] { return t.equal(detail::delta_power(t, t.j(p), m), t.j(PiecewisePoly::zero(p.domain()))); },
                      [&] { return "P = " + to_string(fd_lambda(p)) + ", m = " + std::to_string(m); });
            return true;
        },
        o.exec);
    kernels::failing_cases(
        s.continuous.size(),
        [&](std::size_t i) {
            const auto& f = s.continuous[i];
            const S jf = t.j(f);
            const std::size_t n = f.dimension();
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t k = 0; k < n; ++k)
                    rb.check("delta_commutativity", [&] { return t.equal(t.delta(t.delta(jf, h), k), t.delta(t.delta(jf, k), h)); },
                              [&] { return "f = " + to_string(fd_lambda(f)); });
            const Interval& sub = s.sub[i];
            rb.check("naturality", [&] { return t.equal(t.restrict(jf, sub), t.j(f.restrict_to(sub))); },
                      [&] { return "f = " + to_string(fd_lambda(f)) + ", J = " + sub.to_string(); });
            const Interval mid = Interval(sub.center(), {sub.radii()[0] / 2});
            rb.check("restriction_functorial", [&] { return t.equal(t.restrict(t.restrict(jf, sub), mid), t.restrict(jf, mid)); },
                      [&] { return "f = " + to_string(fd_lambda(f)) + ", J = " + sub.to_string(); });
            return true;
        },
        o.exec);
    return rb.finish();
}

// psi(T) := delta^alpha(j(f)) on each enumerated section T = (alpha, f), followed by the
// diagram checks psi(lambda g) = j(g) and psi(D T) = delta(psi(T)). Throws
// target_invariant naming the first failing condition when the target fails its suite.
template <class S>
MorphismWitness<S> build_psi(const SolutionTriple<S>& t, const std::vector<FormalDistribution>& sections,
                             const PsiOptions& o, PsiVariant variant = PsiVariant::standard);

template <class S>
bool check_uniqueness(const SolutionTriple<S>& t, const MorphismWitness<S>& m1, const MorphismWitness<S>& m2,
                      kernels::Exec exec = kernels::Exec::parallel) {
    if (m1.images.size() != m2.images.size()) return false;
    const auto bad = kernels::failing_cases(
        m1.images.size(), [&](std::size_t i) { return t.equal(m1.images[i], m2.images[i]); }, exec);
    return bad.empty();
}

// The witness with `f` applied to every image.
template <class S>
MorphismWitness<S> map_images(MorphismWitness<S> w, const std::function<S(const S&)>& f) {
    for (auto& s : w.images) s = f(s);
    return w;
}

// Shipped targets.
SolutionTriple<FormalDistribution> identity_target(kernels::Exec exec = kernels::Exec::parallel);

// Sections stored as representatives raised by `shift` along every axis.
struct ShiftedSection {
    FormalDistribution stored;
};
SolutionTriple<ShiftedSection> shifted_target(unsigned shift = 1, kernels::Exec exec = kernels::Exec::parallel);

struct ColombeauTargetOptions {
    unsigned p = kDefaultBumpExponent;
    Gauge gauge;
    unsigned alpha_max = 1;                           // derivative orders checked for negligibility
    std::vector<Rational> eps = {Rational(1, 100), Rational(1, 1000), Rational(1, 10000)};
    unsigned grid = 5;                                // points of the inner compact sampled exactly
};
// Inner compact of a section domain: the closed middle half.
Interval inner_compact(const Interval& j);
SolutionTriple<GSFunction> colombeau_target(const ColombeauTargetOptions& o = {});

// ---- Colombeau quotient tau ------------------------------------------------

template <class G>
struct TauInstance {
    std::string name;
    Interval k;                      // compact where negligibility is sampled
    unsigned alpha_max = 1;
    std::vector<Expr> nets;          // moderate samples
    std::vector<Expr> negligible;    // negligible samples
    std::function<G(const Expr&)> pi;
    std::function<bool(const Expr&)> in_kernel;
    std::function<G(const G&, const G&)> add;
    std::function<G(const G&, const G&)> mul;
    std::function<bool(const G&, const G&)> equal;
};

// tau([u]) := pi(u): well-defined on u + n for sampled negligible n, additive and
// multiplicative on pairs of samples. Negligible samples outside the kernel are violations;
// kernel members that are not negligible are reported as lying outside the category's scope.
template <class G>
CheckReport check_colombeau_tau(const TauInstance<G>& in, kernels::Exec exec = kernels::Exec::parallel) {
    ReportBuilder rb("tau " + in.name);
    for (const char* c : {"kernel_consistent", "well_defined", "additive", "multiplicative"}) rb.declare(c);
    for (const auto& n : in.negligible) {
        const auto v = net_is_negligible_on(n, in.k, in.alpha_max);
        if (v.kind != NegligibilityVerdict::Kind::negligible) {
            rb.note("sample " + n.to_string() + " is not negligible (" + to_string(v.kind) + "); skipped");
            continue;
        }
        rb.check("kernel_consistent", [&] { return in.in_kernel(n); }, [&] { return "negligible net outside kernel: " + n.to_string(); });
    }
    std::mutex note_mu;
    std::vector<std::string> scope;
    kernels::failing_cases(
        in.nets.size(),
        [&](std::size_t i) {
            const Expr& u = in.nets[i];
            if (in.in_kernel(u) &&
                net_is_negligible_on(u, in.k, in.alpha_max).kind != NegligibilityVerdict::Kind::negligible) {
                std::lock_guard lock(note_mu);
                scope.push_back("kernel contains non-negligible net " + u.to_string() + ": outside Col scope");
            }
            const G pu = in.pi(u);
            for (const auto& n : in.negligible)
                rb.check("well_defined", [&] { return in.equal(pu, in.pi(u + n)); },
                          [&] { return "u = " + u.to_string() + ", n = " + n.to_string(); });
            for (const auto& v : in.nets) {
                const G pv = in.pi(v);
                rb.check("additive", [&] { return in.equal(in.pi(u + v), in.add(pu, pv)); },
                          [&] { return "u = " + u.to_string() + ", v = " + v.to_string(); });
                rb.check("multiplicative", [&] { return in.equal(in.pi(u * v), in.mul(pu, pv)); },
                          [&] { return "u = " + u.to_string() + ", v = " + v.to_string(); });
            }
            return true;
        },
        exec);
    std::sort(scope.begin(), scope.end());
    for (auto& s : scope) rb.note(std::move(s));
    rb.note(kFiniteBaseNote);
    return rb.finish();
}

// The quotient itself: pi = identity, kernel = sampled negligibility on k.
TauInstance<Expr> colombeau_identity_instance(const Interval& k, std::vector<Expr> nets, std::vector<Expr> negligible);
// Evaluation at the origin: an algebra map whose kernel strictly contains the negligible nets.
TauInstance<GeneralizedNumber> point_evaluation_instance(const Interval& k, std::vector<Expr> nets,
                                                         std::vector<Expr> negligible);

// ---- ring conditions ---------------------------------------------------------

struct RingCheckOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    Gauge gauge;
    kernels::Exec exec = kernels::Exec::parallel;
};

// Ring axioms and trichotomy on random series triples, zero representatives are
// infinitesimal, rho^-1 is moderate and infinite, every sample lies below an infinity, and
// nets below an infinity are moderate.
CheckReport check_quotient_ring_conditions(const RingCheckOptions& o);

// ---- template definitions ----------------------------------------------------

template <class S>
MorphismWitness<S> build_psi(const SolutionTriple<S>& t, const std::vector<FormalDistribution>& sections,
                             const PsiOptions& o, PsiVariant variant) {
    const CheckReport suite = check_target(t, o);
    for (const auto& c : suite.conditions)
        if (!c.passed)
            throw Error(ErrorCode::target_invariant, "target " + t.name + " fails condition " + c.name + ": " +
                                      (c.violations.empty() ? std::string() : c.violations.front()));

    MorphismWitness<S> w;
    w.target = t.name;
    w.sections = sections;
    const std::size_t count = sections.size();
    std::vector<std::optional<S>> images(count);
    std::mutex mu;
    auto psi = [&](const FormalDistribution& s) {
        return detail::delta_power(t, t.j(s.rep()), s.order()[0]);
    };
    kernels::failing_cases(
        count,
        [&](std::size_t i) {
            const FormalDistribution& sec = sections[i];
            Rng rng(o.seed * 0x9e3779b97f4a7c15ULL + i);
            FormalDistribution used = sec;
            if (variant == PsiVariant::representative) used = random_representative(rng, sec, 1);
            unsigned order = used.order()[0];
            if (variant == PsiVariant::scrambled && order > 0) --order;
            const S image = detail::delta_power(t, t.j(used.rep()), order);

            std::vector<std::string> fails;
            bool emb = true, der = true, exp = true;
            std::size_t checks = 0;
            auto holds = [&](const std::function<bool()>& test) {
                try {
                    return test();
                } catch (const std::exception& e) {
                    fails.push_back(std::string("threw: ") + e.what());
                    return false;
                }
            };
            // psi on a raised representative of lambda(g), g the representative of the section
            const MultiIndex raise(std::vector<unsigned>{sec.order()[0]});
            const FormalDistribution lifted = fd_raise(fd_lambda(sec.rep()), raise);
            ++checks;
            if (!holds([&] { return t.equal(psi(lifted), t.j(sec.rep())); })) {
                emb = false;
                fails.push_back("embedding: " + detail::section_label(sec));
            }
            // psi(D T) on an independent representative of D T
            const FormalDistribution dt = random_representative(rng, fd_derive(sec, 0), 1);
            ++checks;
            if (!holds([&] { return t.equal(psi(dt), t.delta(image, 0)); })) {
                der = false;
                fails.push_back("derivative: " + detail::section_label(sec));
            }
            if (t.expected) {
                ++checks;
                if (!holds([&] { return t.equal(image, t.expected(sec)); })) {
                    exp = false;
                    fails.push_back("expected image: " + detail::section_label(sec));
                }
            }
            std::lock_guard lock(mu);
            images[i] = image;
            w.preserves_embedding = w.preserves_embedding && emb;
            w.preserves_derivatives = w.preserves_derivatives && der;
            w.matches_expected = w.matches_expected && exp;
            w.checks += checks;
            for (auto& f : fails) w.failures.push_back(std::move(f));
            return true;
        },
        o.exec);
    w.images.reserve(count);
    for (auto& im : images) w.images.push_back(std::move(*im));
    std::sort(w.failures.begin(), w.failures.end());
    return w;
}

}  // namespace gfcalc
