#include "gfcalc/workspace.hpp"

#include <fstream>
#include <sstream>

namespace gfcalc {

io::json normalize(const io::json& object) {
    const std::string type = io::type_of(object);
    if (type == "distribution") return io::encode(io::decode_distribution(object));
    if (type == "piecewise") return io::encode(io::decode_piecewise(object));
    if (type == "gsf") return io::encode(io::decode_gsf(object));
    if (type == "number") return io::encode(io::decode_number(object));
    if (type == "series") return io::encode(io::decode_gauge_expr(object));
    if (type == "net") return io::encode(io::decode_net(object));
    if (type == "point") return io::encode(io::decode_point(object));
    if (type == "gauge") return io::encode(io::decode_gauge(object));
    throw Error(ErrorCode::invalid_argument, "cannot bind an object of type '" + type + "'");
}

void Workspace::bind(const std::string& name, const io::json& object) {
    if (name.empty()) throw Error(ErrorCode::invalid_argument, "binding names must be nonempty");
    const io::json n = normalize(object);
    if (normalize(n) != n) throw Error(ErrorCode::invalid_argument, "binding " + name + " does not round-trip");
    bindings_[name] = n;
}

const io::json& Workspace::lookup(const std::string& name) const {
    auto it = bindings_.find(name);
    if (it == bindings_.end()) throw Error(ErrorCode::invalid_argument, "no binding named " + name);
    return it->second;
}

io::json Workspace::to_json() const {
    io::json cfg = {{"gauge", io::encode(config.gauge)},
                    {"level", config.level},
                    {"alpha_cap", config.alpha_cap},
                    {"d_cap", config.d_cap},
                    {"seed", config.seed}};
    io::json b = io::json::object();
    for (const auto& [k, v] : bindings_) b[k] = v;
    return {{"config", cfg}, {"bindings", b}};
}

Workspace Workspace::from_json(const io::json& j) {
    Workspace w;
    if (j.contains("config")) {
        const auto& c = j.at("config");
        if (c.contains("gauge")) w.config.gauge = io::decode_gauge(c.at("gauge"));
        w.config.level = c.value("level", w.config.level);
        w.config.alpha_cap = c.value("alpha_cap", w.config.alpha_cap);
        w.config.d_cap = c.value("d_cap", w.config.d_cap);
        w.config.seed = c.value("seed", w.config.seed);
    }
    if (j.contains("bindings"))
        for (const auto& [k, v] : j.at("bindings").items()) w.bind(k, v);
    return w;
}

Workspace Workspace::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return from_json(io::json::parse(ss.str()));
    } catch (const io::json::exception& e) {
        throw Error(ErrorCode::parse_error, "workspace " + path + ": " + e.what());
    }
}

void Workspace::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path);
    out << to_json().dump(2) << "\n";
}

}  // namespace gfcalc
