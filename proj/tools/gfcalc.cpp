#include "gfcalc/fd_presheaf.hpp"
#include "gfcalc/gsf.hpp"
#include "gfcalc/json_io.hpp"
#include "gfcalc/syntax.hpp"
#include "gfcalc/universal.hpp"
#include "gfcalc/workspace.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace gfcalc;
using io::json;

namespace {

struct Options {
    std::string gauge;
    unsigned level = 0;  // 0: command default
    std::uint64_t seed = 1;
    bool json_out = false;
    bool floating = false;
    std::string workspace;
    std::string bind;
};

struct Result {
    int code = 0;
    json doc;
    std::string text;
};

class Session {
public:
    explicit Session(const Options& o) : opt(o) {
        if (!o.workspace.empty()) ws = Workspace::load(o.workspace);
        gauge = o.gauge.empty() ? ws.config.gauge : Gauge::power(parse_rational(o.gauge));
    }

    const Options& opt;
    Workspace ws;
    Gauge gauge;

    unsigned level(unsigned fallback) const { return opt.level ? opt.level : fallback; }

    std::optional<json> object(const std::string& arg) const {
        if (!arg.empty() && arg[0] == '@') return ws.lookup(arg.substr(1));
        if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) {
            try {
                return json::parse(arg);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::parse_error, std::string("json: ") + e.what());
            }
        }
        return std::nullopt;
    }

    FormalDistribution distribution(const std::string& arg) const {
        if (auto j = object(arg)) return io::decode_distribution(*j);
        return parse_distribution(arg);
    }

    PiecewisePoly piecewise(const std::string& arg, const Interval& domain) const {
        if (auto j = object(arg)) {
            if (io::type_of(*j) == "distribution") return io::decode_distribution(*j).rep();
            return io::decode_piecewise(*j);
        }
        return parse_piecewise(arg, domain);
    }

    GeneralizedNumber number(const std::string& arg) const {
        if (auto j = object(arg)) return io::decode_number(*j, gauge);
        return parse_number(arg, gauge);
    }

    GSFunction gsf(const std::string& arg, unsigned p) const {
        if (auto j = object(arg)) {
            if (io::type_of(*j) == "distribution") return embed_distribution(io::decode_distribution(*j), p, gauge);
            return io::decode_gsf(*j);
        }
        try {
            return embed_distribution(parse_distribution(arg), p, gauge);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::parse_error) throw;
        }
        const Expr e = parse_expr(arg);
        return GSFunction(e, 1, GsfDomain::everywhere(1), gauge);
    }

    std::string rational(const Rational& q) const {
        if (!opt.floating) return to_string(q);
        return fmt(to_double(q));
    }

    static std::string fmt(double v) {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }
};

Interval parse_bounds(const std::string& text) {
    const auto v = parse_rational_list(text);
    if (v.size() != 2 || !(v[0] < v[1])) throw Error(ErrorCode::invalid_argument, "bounds must be lo,hi with lo < hi");
    return Interval::from_bounds({v[0]}, {v[1]});
}

Result text_result(json doc, std::string text, int code = 0) { return Result{code, std::move(doc), std::move(text)}; }

Result distribution_result(const FormalDistribution& t) { return text_result(io::encode(t), to_string(t)); }

Result report_result(const CheckReport& r) {
    std::string text;
    for (const auto& c : r.conditions) {
        text += std::string(c.passed ? "pass" : "FAIL") + "  " + r.suite + "/" + c.name + "  (" + std::to_string(c.checks) + " checks)\n";
        for (const auto& v : c.violations) text += "      " + v + "\n";
    }
    for (const auto& n : r.notes) text += "note: " + n + "\n";
    text += r.passed() ? "pass" : "FAIL";
    return text_result(io::encode(r), text, r.passed() ? 0 : 1);
}

Result merge_reports(const std::vector<Result>& parts) {
    Result out;
    out.doc = json::array();
    for (const auto& p : parts) {
        out.doc.push_back(p.doc);
        out.text += (out.text.empty() ? "" : "\n") + p.text;
        out.code = std::max(out.code, p.code);
    }
    return out;
}

QInstances default_q_instances(bool counterexample) {
    QInstances in;
    for (int m = 1; m <= 4; ++m) {
        InfinityClass s;
        for (int k = 1; k <= m; ++k) s.insert(Rational(-k));
        in.objects.push_back(s);
    }
    for (std::size_t a = 0; a < in.objects.size(); ++a)
        for (std::size_t b = a + 1; b < in.objects.size(); ++b) {
            SetMap f{a, b, {}};
            for (const auto& x : in.objects[a]) f.map.emplace(x, x);
            in.arrows.push_back(f);
        }
    if (counterexample) in.arrows.push_back(SetMap{0, 1, {{Rational(-1), Rational(-2)}}});
    return in;
}

template <class S>
Result psi_result(const SolutionTriple<S>& t, const PsiOptions& o) {
    const auto sections = enumerate_sections(o);
    const CheckReport suite = check_target(t, o);
    json doc = {{"target", t.name}, {"sections", sections.size()}, {"suite", io::encode(suite)}};
    std::string text = "target " + t.name + ": " + std::to_string(sections.size()) + " sections\n";
    if (!suite.passed()) {
        auto r = report_result(suite);
        doc["passed"] = false;
        return text_result(doc, text + r.text, 1);
    }
    const auto w = build_psi(t, sections, o);
    const auto w2 = build_psi(t, sections, o, PsiVariant::representative);
    const bool unique = check_uniqueness(t, w, w2, o.exec);
    const bool ok = w.passed() && w2.passed() && unique;
    doc["preserves_embedding"] = w.preserves_embedding;
    doc["preserves_derivatives"] = w.preserves_derivatives;
    doc["matches_expected"] = w.matches_expected;
    doc["checks"] = w.checks;
    doc["unique"] = unique;
    doc["failures"] = w.failures;
    doc["passed"] = ok;
    doc["note"] = kFiniteBaseNote;
    auto line = [](bool b, const std::string& s) { return std::string(b ? "pass" : "FAIL") + "  " + s + "\n"; };
    text += line(w.preserves_embedding, "psi(lambda f) = j(f)");
    text += line(w.preserves_derivatives, "psi(D T) = delta(psi(T))");
    text += line(w.matches_expected, "psi agrees with the reference image");
    text += line(unique, "independent witnesses agree");
    for (const auto& f : w.failures) text += "      " + f + "\n";
    text += std::string("note: ") + kFiniteBaseNote + "\n" + (ok ? "pass" : "FAIL");
    return text_result(doc, text, ok ? 0 : 1);
}

void emit_error(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gfcalc: formal distributions, generalized numbers and generalized smooth functions"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--gauge", opt.gauge, "gauge exponent p, rho = eps^p");
    app.add_option("--level", opt.level, "dyadic base level L");
    app.add_option("--seed", opt.seed, "random seed");
    app.add_flag("--json", opt.json_out, "print JSON documents");
    app.add_flag("--float", opt.floating, "print numbers as floating point");
    app.add_option("--workspace", opt.workspace, "workspace file with named bindings");
    app.add_option("--bind", opt.bind, "store the result under this name in the workspace");

    std::function<Result(Session&)> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        return parent->add_subcommand(name, help);
    };

    // gn
    auto* gn = app.add_subcommand("gn", "generalized numbers")->require_subcommand(1);
    std::string gn_arg, gn_at;
    auto* gn_eval = leaf(gn, "eval", "normalize a number, or evaluate it at eps");
    gn_eval->add_option("x", gn_arg, "number, e.g. '2/rho + rho^(1/2)'")->required();
    gn_eval->add_option("--at", gn_at, "eps");
    gn_eval->callback([&] {
        action = [&](Session& s) {
            const auto x = s.number(gn_arg);
            json doc;
            std::string text;
            if (x.is_symbolic()) {
                doc = io::encode(x);
                text = x.to_string();
            } else {
                doc = {{"type", "opaque"}, {"label", x.opaque().label}};
                text = x.to_string();
            }
            if (!gn_at.empty()) {
                const Rational eps = parse_rational(gn_at);
                std::optional<Rational> exact;
                if (x.is_symbolic() && !s.opt.floating)
                    if (auto rho = s.gauge.rho_exact(eps)) exact = x.symbolic().evaluate_exact(*rho);
                text = exact ? to_string(*exact) : Session::fmt(x.sample(to_double(eps)));
                doc = {{"eps", gn_at}, {"value", text}};
            }
            return text_result(doc, text);
        };
    });
    auto* gn_class = leaf(gn, "classify", "zero, infinitesimal, finite or infinite; moderateness");
    gn_class->add_option("x", gn_arg)->required();
    gn_class->callback([&] {
        action = [&](Session& s) {
            const auto x = s.number(gn_arg);
            const auto c = gn_classify(x);
            const auto m = gn_is_moderate(x);
            json doc = io::encode(c);
            doc["moderateness"] = io::encode(m);
            return text_result(doc, std::string(to_string(c.cls)) + (c.heuristic ? " (sampled)" : "") +
                                        "; moderate: " + m.to_string());
        };
    });

    // dist
    auto* dist = app.add_subcommand("dist", "formal distributions")->require_subcommand(1);
    std::string d1, d2, bounds;
    std::size_t axis = 0;
    unsigned times = 1;
    auto* dist_new = leaf(dist, "new", "parse and print a distribution");
    dist_new->add_option("t", d1, "e.g. '((2),ramp)' or '((1),x^2) on (0,2)'")->required();
    dist_new->callback([&] { action = [&](Session& s) { return distribution_result(s.distribution(d1)); }; });
    auto* dist_derive = leaf(dist, "derive", "derivative along an axis");
    dist_derive->add_option("t", d1)->required();
    dist_derive->add_option("--axis", axis);
    dist_derive->add_option("--times", times);
    dist_derive->callback([&] {
        action = [&](Session& s) {
            auto t = s.distribution(d1);
            for (unsigned i = 0; i < times; ++i) t = fd_derive(t, axis);
            return distribution_result(t);
        };
    });
    auto* dist_add = leaf(dist, "add", "sum of two distributions");
    dist_add->add_option("t", d1)->required();
    dist_add->add_option("s", d2)->required();
    dist_add->callback([&] {
        action = [&](Session& s) { return distribution_result(fd_add(s.distribution(d1), s.distribution(d2))); };
    });
    auto* dist_eq = leaf(dist, "eq", "class equality");
    dist_eq->add_option("t", d1)->required();
    dist_eq->add_option("s", d2)->required();
    dist_eq->callback([&] {
        action = [&](Session& s) {
            const bool eq = fd_equal(s.distribution(d1), s.distribution(d2));
            return text_result(json{{"equal", eq}}, eq ? "true" : "false");
        };
    });
    auto* dist_pair = leaf(dist, "pair", "exact pairing with a test function");
    dist_pair->add_option("t", d1)->required();
    dist_pair->add_option("phi", d2, "piecewise polynomial on the same domain")->required();
    dist_pair->callback([&] {
        action = [&](Session& s) {
            const auto t = s.distribution(d1);
            const Rational v = fd_pair(t, s.piecewise(d2, t.domain()));
            return text_result(json{{"value", s.rational(v)}}, s.rational(v));
        };
    });
    auto* dist_restrict = leaf(dist, "restrict", "restriction to a subinterval");
    dist_restrict->add_option("t", d1)->required();
    dist_restrict->add_option("--to", bounds, "lo,hi")->required();
    dist_restrict->callback([&] {
        action = [&](Session& s) { return distribution_result(fd_restrict(s.distribution(d1), parse_bounds(bounds))); };
    });

    // sheaf
    auto* sheaf = app.add_subcommand("sheaf", "sheaf operations on the dyadic base")->require_subcommand(1);
    std::vector<std::string> members;
    std::size_t cases = 200;
    auto* glue = leaf(sheaf, "glue", "glue a compatible family over the hull of its domains");
    glue->add_option("sections", members, "sections on base intervals of (-1,1)")->required();
    glue->callback([&] {
        action = [&](Session& s) {
            CompatibleFamily<FormalDistribution> fam;
            std::vector<Rational> lo, hi;
            for (const auto& m : members) {
                auto t = s.distribution(m);
                if (lo.empty() || t.domain().lo(0) < lo[0]) lo = {t.domain().lo(0)};
                if (hi.empty() || t.domain().hi(0) > hi[0]) hi = {t.domain().hi(0)};
                fam.push_back({t.domain(), std::move(t)});
            }
            const BaseIndex base = BaseIndex::standard(1, s.level(5));
            MaximalFamily<DistributionPresheaf> mf(DistributionPresheaf{}, base, fam);
            const Interval hull = Interval::from_bounds(lo, hi);
            if (!base.is_base(hull)) throw Error(ErrorCode::invalid_argument, hull.to_string() + " is not a base interval");
            const auto e = mf.lookup(hull);
            if (e.status == GlueStatus::decided) return distribution_result(*e.section);
            const std::string status = e.status == GlueStatus::absent ? "absent" : "undecided";
            return text_result(json{{"status", status}, {"note", e.note}}, status + (e.note.empty() ? "" : ": " + e.note), 1);
        };
    });
    auto* laws = leaf(sheaf, "laws", "randomized sheaf-law and naturality checks");
    laws->add_option("--cases", cases);
    laws->callback([&] {
        action = [&](Session& s) {
            SheafLawOptions o;
            o.cases = cases;
            o.level = s.level(5);
            o.seed = s.opt.seed;
            const LawReport a = sheaf_laws_check(o);
            const LawReport b = eta_naturality_check(o);
            std::string text;
            for (const auto* r : {&a, &b}) {
                for (const auto& [law, n] : r->checks) text += law + ": " + std::to_string(n) + " checks\n";
                for (const auto& v : r->violations) text += "FAIL " + v.law + ": " + v.detail + "\n";
            }
            const bool ok = a.passed() && b.passed();
            text += ok ? "pass" : "FAIL";
            return text_result(json{{"sheaf", io::encode(a)}, {"eta", io::encode(b)}, {"passed", ok}}, text, ok ? 0 : 1);
        };
    });

    // gsf
    auto* gsf = app.add_subcommand("gsf", "generalized smooth functions")->require_subcommand(1);
    unsigned p = kDefaultBumpExponent;
    std::string at;
    unsigned orders = 2;
    auto* embed = leaf(gsf, "embed", "mollified net of a distribution");
    embed->add_option("t", d1)->required();
    embed->add_option("--p", p, "bump exponent");
    embed->callback([&] {
        action = [&](Session& s) {
            const auto f = embed_distribution(s.distribution(d1), p, s.gauge);
            const Expr& e = f.net();
            const std::string body = e.op() == ExprOp::piecewise ? to_string(*e.net()) : e.to_string();
            return text_result(io::encode(f), body + "\non " + f.domain().to_string());
        };
    });
    auto* geval = leaf(gsf, "eval", "value at a generalized point");
    geval->add_option("f", d1, "distribution, expression in x and rho, or JSON")->required();
    geval->add_option("x", at, "point, e.g. 'rho/2'")->required();
    geval->add_option("--p", p, "bump exponent when embedding");
    geval->callback([&] {
        action = [&](Session& s) {
            const auto f = s.gsf(d1, p);
            const auto v = gsf_eval(f, GeneralizedPoint{{s.number(at)}});
            if (v.is_symbolic()) return text_result(io::encode(v), v.to_string());
            return text_result(json{{"type", "opaque"}, {"label", v.opaque().label}}, v.to_string());
        };
    });
    auto* gderive = leaf(gsf, "derive", "derivative of the defining net");
    gderive->add_option("f", d1)->required();
    gderive->add_option("--times", times);
    gderive->add_option("--p", p);
    gderive->callback([&] {
        action = [&](Session& s) {
            const auto f = gsf_derive(s.gsf(d1, p), MultiIndex{times});
            return text_result(io::encode(f), f.net().to_string());
        };
    });
    auto* classeq = leaf(gsf, "class-eq", "Colombeau class equality on a compact");
    classeq->add_option("f", d1)->required();
    classeq->add_option("g", d2)->required();
    classeq->add_option("--on", bounds, "lo,hi")->required();
    classeq->add_option("--orders", orders, "derivative orders checked");
    classeq->add_option("--p", p);
    classeq->callback([&] {
        action = [&](Session& s) {
            const auto f = s.gsf(d1, p), g = s.gsf(d2, p);
            unsigned k = orders;
            for (const auto* h : {&f, &g})
                if (auto b = h->budget()) k = std::min(k, static_cast<unsigned>(std::max(0, *b)));
            const auto v = colombeau_class_equal(f, g, parse_bounds(bounds), k);
            return text_result(io::encode(v), std::string(to_string(v.kind)) + " (" + to_string(v.method) + ")" +
                                                  (v.detail.empty() ? "" : ": " + v.detail));
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "verification suites")->require_subcommand(1);
    std::string target = "all";
    std::size_t stride = 0, samples = 1000;
    bool counterexample = false;
    auto* vpsi = leaf(verify, "psi", "the morphism psi into solution triples");
    vpsi->add_option("--target", target, "identity, shifted, colombeau or all");
    vpsi->add_option("--stride", stride, "keep every n-th section (default 1, colombeau 17)");
    vpsi->callback([&] {
        action = [&](Session& s) {
            PsiOptions o;
            o.level = s.level(s.ws.config.level);
            o.alpha_cap = s.ws.config.alpha_cap;
            o.d_cap = s.ws.config.d_cap;
            o.seed = s.opt.seed;
            std::vector<Result> parts;
            const bool all = target == "all";
            if (!all && target != "identity" && target != "shifted" && target != "colombeau")
                throw Error(ErrorCode::invalid_argument, "unknown target " + target);
            o.stride = stride ? stride : 1;
            if (all || target == "identity") parts.push_back(psi_result(identity_target(), o));
            if (all || target == "shifted") parts.push_back(psi_result(shifted_target(), o));
            if (all || target == "colombeau") {
                o.stride = stride ? stride : 17;
                ColombeauTargetOptions co;
                co.gauge = s.gauge;
                parts.push_back(psi_result(colombeau_target(co), o));
            }
            return merge_reports(parts);
        };
    });
    auto* vtau = leaf(verify, "tau", "the quotient morphism tau on net samples");
    vtau->callback([&] {
        action = [&](Session&) {
            const Interval k = Interval::unit(1);
            const Expr x = Expr::variable(0);
            const std::vector<Expr> nets = {x, Expr(1) + x * x, Expr::sin(x), Expr::rho_power(Rational(-1)) * x,
                                            Expr::cos(x * Expr::rho_power(Rational(-1)))};
            const std::vector<Expr> negl = {canonical_perturbation(1, Gauge()),
                                            Expr::exp(-Expr::rho_power(Rational(-1))) * x * x};
            return merge_reports({report_result(check_colombeau_tau(colombeau_identity_instance(k, nets, negl))),
                                  report_result(check_colombeau_tau(point_evaluation_instance(k, nets, negl)))});
        };
    });
    auto* vring = leaf(verify, "ring", "ring axioms and quotient-ring conditions");
    vring->add_option("--samples", samples);
    vring->callback([&] {
        action = [&](Session& s) {
            RingCheckOptions o;
            o.samples = samples;
            o.seed = s.opt.seed;
            o.gauge = s.gauge;
            return report_result(check_quotient_ring_conditions(o));
        };
    });
    auto* vq = leaf(verify, "q-laws", "identity and composition closure of the inclusion property");
    vq->add_flag("--with-counterexample", counterexample, "add a non-inclusion arrow");
    vq->callback([&] { action = [&](Session&) { return report_result(check_Q_laws(default_q_instances(counterexample))); }; });

    // plot
    auto* plot = app.add_subcommand("plot", "plot data")->require_subcommand(1);
    std::string eps_list = "1e-1,1e-2";
    unsigned grid = 201;
    std::string lo_s, hi_s;
    auto* reg = leaf(plot, "reg", "CSV rows eps,x,f_eps(x) of a regularization");
    reg->add_option("f", d1)->required();
    reg->add_option("--eps", eps_list, "comma separated eps values");
    reg->add_option("--grid", grid, "points per eps");
    reg->add_option("--lo", lo_s);
    reg->add_option("--hi", hi_s);
    reg->add_option("--p", p);
    reg->callback([&] {
        action = [&](Session& s) {
            const auto f = s.gsf(d1, p);
            Rational lo(-1), hi(1);
            if (f.domain().kind() == GsfDomain::Kind::compactly_supported) {
                lo = f.domain().omega().lo(0);
                hi = f.domain().omega().hi(0);
            }
            if (!lo_s.empty()) lo = parse_rational(lo_s);
            if (!hi_s.empty()) hi = parse_rational(hi_s);
            const auto rows = regularization_rows(f, parse_rational_list(eps_list), lo, hi, grid, !s.opt.floating);
            std::string text = "eps,x,value";
            json doc = json::array();
            for (const auto& r : rows) {
                text += "\n" + r.eps + "," + r.x + "," + r.value;
                doc.push_back({{"eps", r.eps}, {"x", r.x}, {"value", r.value}});
            }
            return text_result(doc, text);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error("usage", e.what());
        return 2;
    }
    try {
        Session session(opt);
        Result r = action(session);
        if (opt.json_out) std::cout << r.doc.dump(2) << "\n";
        else std::cout << r.text << "\n";
        if (!opt.bind.empty()) {
            if (opt.workspace.empty()) throw Error(ErrorCode::invalid_argument, "--bind needs --workspace");
            session.ws.bind(opt.bind, r.doc);
            session.ws.save(opt.workspace);
        }
        return r.code;
    } catch (const Error& e) {
        emit_error(error_code_name(e.code()), e.what());
        const bool usage = e.code() == ErrorCode::parse_error || e.code() == ErrorCode::invalid_argument;
        return usage ? 2 : 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}
