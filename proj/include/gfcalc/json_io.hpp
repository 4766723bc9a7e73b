#pragma once

#include "gfcalc/expr.hpp"
#include "gfcalc/fd_presheaf.hpp"
#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"
#include "gfcalc/gsf.hpp"
#include "gfcalc/piecewise_net.hpp"
#include "gfcalc/universal.hpp"

#include "json.hpp"

#include <string>

// JSON encodings of the domain objects. Rationals are strings ("-3/4"); expression trees
// are prefix arrays such as ["sum", ["const", "1"], ["var", 0]].
namespace gfcalc::io {

using json = nlohmann::json;

json encode(const Rational& q);
json encode(const MultiIndex& m);
json encode(const Interval& i);
json encode(const Poly& p);
json encode(const PiecewisePoly& f);
json encode(const FormalDistribution& t);
json encode(const Gauge& g);
json encode(const GaugeExpr& g);
// Opaque numbers cannot be encoded; throws invalid_argument.
json encode(const GeneralizedNumber& x);
json encode(const NetPoly& p);
json encode(const PiecewiseNet& n);
json encode(const Expr& e);
json encode(const GeneralizedPoint& x);
json encode(const GsfDomain& d);
json encode(const GSFunction& f);
json encode(const Classification& c);
json encode(const Moderateness& m);
json encode(const NegligibilityVerdict& v);
json encode(const CheckReport& r);
json encode(const LawReport& r);
json encode(const PhiReport& r);
json encode(const PerturbationRecord& r);

Rational decode_rational(const json& j);
MultiIndex decode_multi_index(const json& j);
Interval decode_interval(const json& j);
Poly decode_poly(const json& j);
PiecewisePoly decode_piecewise(const json& j);
FormalDistribution decode_distribution(const json& j);
Gauge decode_gauge(const json& j);
GaugeExpr decode_gauge_expr(const json& j);
GeneralizedNumber decode_number(const json& j, const Gauge& gauge = Gauge());
NetPoly decode_net_poly(const json& j);
PiecewiseNet decode_net(const json& j);
Expr decode_expr(const json& j);
GeneralizedPoint decode_point(const json& j, const Gauge& gauge = Gauge());
GsfDomain decode_domain(const json& j, const Gauge& gauge = Gauge());
GSFunction decode_gsf(const json& j);

// Type tag of an encoded object ("distribution", "gsf", ...), empty when untagged.
std::string type_of(const json& j);

}  // namespace gfcalc::io
