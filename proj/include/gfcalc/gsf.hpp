#pragma once

#include "gfcalc/expr.hpp"
#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace gfcalc {

struct GeneralizedPoint {
    std::vector<GeneralizedNumber> coords;

    static GeneralizedPoint symbolic(const std::vector<GaugeExpr>& coords, const Gauge& gauge = Gauge());
    static GeneralizedPoint standard(const std::vector<Rational>& coords, const Gauge& gauge = Gauge());
    std::size_t dimension() const { return coords.size(); }
    bool is_symbolic() const;
    std::vector<GaugeExpr> symbolic_coords() const;
    std::string to_string() const;
};

struct SharpBall {
    GeneralizedPoint center;
    GeneralizedNumber radius;
};

// Subset of the generalized points: all points, a finite union of sharp balls, or the
// compactly supported points of an open box.
class GsfDomain {
public:
    enum class Kind { everywhere, balls, compactly_supported };

    static GsfDomain everywhere(std::size_t n);
    static GsfDomain balls(std::vector<SharpBall> balls);
    static GsfDomain compactly_supported(const Interval& omega);

    Kind kind() const { return kind_; }
    std::size_t dimension() const { return dim_; }
    const std::vector<SharpBall>& ball_list() const { return balls_; }
    const Interval& omega() const { return omega_; }

    // Throws undetermined when the coordinates are opaque.
    bool contains(const GeneralizedPoint& x) const;
    // Whether the closed box k lies in the domain's standard part.
    bool covers(const Interval& k) const;
    std::string to_string() const;

private:
    Kind kind_ = Kind::everywhere;
    std::size_t dim_ = 1;
    std::vector<SharpBall> balls_;
    Interval omega_;
};

struct CertificateEntry {
    std::string point;
    MultiIndex alpha;
    Moderateness verdict;
    std::string note;
};

struct PerturbationRecord {
    std::string point;
    MultiIndex alpha;
    bool exact = false;  // decided symbolically
    bool agree = false;
    double gap_exponent = 0;  // sampled leading exponent of the difference
};

// Append-only record of the checks run on a generalized smooth function.
class Certificate {
public:
    void add(CertificateEntry e);
    void add(PerturbationRecord r);
    void add_point(const GeneralizedPoint& x, unsigned order);
    std::vector<CertificateEntry> entries() const;
    std::vector<PerturbationRecord> perturbations() const;
    std::vector<GeneralizedPoint> points() const;
    // Largest order certified at every recorded point; nullopt without points.
    std::optional<unsigned> certified_order() const;

private:
    mutable std::mutex mu_;
    std::vector<CertificateEntry> entries_;
    std::vector<PerturbationRecord> perturbations_;
    std::vector<GeneralizedPoint> points_;
    std::vector<unsigned> orders_;
};

class GSFunction {
public:
    GSFunction(Expr net, std::size_t dim, GsfDomain domain, Gauge gauge = Gauge());

    const Expr& net() const { return net_; }
    std::size_t dimension() const { return dim_; }
    const GsfDomain& domain() const { return domain_; }
    const Gauge& gauge() const { return gauge_; }
    std::optional<int> budget() const { return net_.budget(); }
    const std::shared_ptr<Certificate>& certificate() const { return cert_; }

private:
    Expr net_;
    std::size_t dim_;
    GsfDomain domain_;
    Gauge gauge_;
    std::shared_ptr<Certificate> cert_;
};

// Value of the net at x without domain or moderateness checks.
GeneralizedNumber evaluate_net(const Expr& net, const GeneralizedPoint& x, const Gauge& gauge);

GeneralizedNumber gsf_eval(const GSFunction& f, const GeneralizedPoint& x);
// Checks moderateness of every derivative of order <= max_order at each point and records it.
bool gsf_certify(const GSFunction& f, const std::vector<GeneralizedPoint>& points, unsigned max_order);
GSFunction gsf_derive(const GSFunction& f, const MultiIndex& alpha);

// exp(-1/eps) * sin(x_1 + ... + x_n), written through rho for power gauges.
Expr canonical_perturbation(std::size_t dim, const Gauge& gauge);
PerturbationRecord check_perturbation(const GSFunction& f, const MultiIndex& alpha, const GeneralizedPoint& x);

// Equality in the ring of generalized numbers. Opaque bodies agree when their samples match
// to rounding or their difference is sampled negligible.
bool gn_agree(const GeneralizedNumber& a, const GeneralizedNumber& b);

enum class VerdictMethod { exact, bound, sampled };
const char* to_string(VerdictMethod m);

struct OrderVerdict {
    unsigned order = 0;
    Moderateness moderate;
    VerdictMethod method = VerdictMethod::exact;
};

struct NegligibilityVerdict {
    enum class Kind { negligible, not_negligible, undetermined } kind = Kind::undetermined;
    VerdictMethod method = VerdictMethod::exact;
    std::string detail;
};
const char* to_string(NegligibilityVerdict::Kind k);

std::vector<OrderVerdict> net_is_moderate_on(const Expr& u, const Interval& k, unsigned alpha_max,
                                             const Gauge& gauge = Gauge());
NegligibilityVerdict net_is_negligible_on(const Expr& u, const Interval& k, unsigned alpha_max,
                                          const Gauge& gauge = Gauge());

inline constexpr unsigned kDefaultBumpExponent = 8;

// Net rep * d^order(mu_rho) on the compactly supported points of the distribution's domain.
GSFunction embed_distribution(const FormalDistribution& t, unsigned p = kDefaultBumpExponent,
                              const Gauge& gauge = Gauge());
// Exact integral of the defining net against phi; needs a piecewise-polynomial net.
GaugeExpr gsf_pair(const GSFunction& f, const PiecewisePoly& phi);

NegligibilityVerdict colombeau_class_equal(const GSFunction& f, const GSFunction& g, const Interval& k,
                                           unsigned alpha_max);

struct RegularizationRow {
    std::string eps;
    std::string x;
    std::string value;
};

// Rows (eps, x, f_eps(x)) over a grid of `grid` points of the closed box [lo, hi].
std::vector<RegularizationRow> regularization_rows(const GSFunction& f, const std::vector<Rational>& eps,
                                                   const Rational& lo, const Rational& hi, unsigned grid,
                                                   bool exact);

// Carrier of the universal property: elements with chosen moderate-net preimages, their
// point maps and derivative operators, all given as callbacks.
struct PhiCarrier {
    std::size_t size = 0;
    std::function<std::optional<GSFunction>(std::size_t)> preimage;
    std::function<GeneralizedNumber(std::size_t, const GeneralizedPoint&)> point_map;
    std::function<GeneralizedNumber(std::size_t, const MultiIndex&, const GeneralizedPoint&)> derivative;
};

using PhiCandidate = std::function<GeneralizedNumber(std::size_t, const GeneralizedPoint&)>;

struct PhiReport {
    std::size_t checks = 0;
    bool commutes = true;              // phi(q(u)) = [u]_f at every sample
    bool preserves_derivatives = true;
    bool unique = true;                // agreement with every supplied candidate
    std::vector<std::string> failures;
    bool passed() const { return commutes && preserves_derivatives && unique; }
};

PhiReport gsf_universal_phi(const PhiCarrier& carrier, const std::vector<GeneralizedPoint>& samples,
                            unsigned max_order, const std::vector<PhiCandidate>& candidates = {});

}  // namespace gfcalc
