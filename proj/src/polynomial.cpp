#include "gfcalc/polynomial.hpp"

namespace gfcalc {

std::string to_string(const Poly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    auto name = [&](std::size_t k) -> std::string {
        if (k < names.size()) return names[k];
        if (p.nvars() == 1) return "x";
        return "x" + std::to_string(k + 1);
    };
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = abs(c);
        std::string mono;
        for (std::size_t k = 0; k < kMaxVars; ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += name(k);
            if (e[k] != 1) mono += "^" + (e[k] < 0 ? "(" + std::to_string(e[k]) + ")" : std::to_string(e[k]));
        }
        std::string body;
        if (mono.empty()) body = mag.get_str();
        else if (mag == 1) body = mono;
        else body = mag.get_str() + "*" + mono;
        if (first) out = (sgn(c) < 0 ? "-" : "") + body;
        else out += (sgn(c) < 0 ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

}  // namespace gfcalc
