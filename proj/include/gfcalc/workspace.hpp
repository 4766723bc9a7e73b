#pragma once

#include "gfcalc/gauge.hpp"
#include "gfcalc/json_io.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace gfcalc {

struct WorkspaceConfig {
    Gauge gauge;
    unsigned level = 4;
    unsigned alpha_cap = 4;
    int d_cap = 5;
    std::uint64_t seed = 1;
};

// Named encoded objects plus the shared configuration, stored as one JSON document.
class Workspace {
public:
    static Workspace load(const std::string& path);  // empty workspace when the file is missing
    void save(const std::string& path) const;

    // Replaces an existing binding; the object must survive a decode/encode round trip.
    void bind(const std::string& name, const io::json& object);
    const io::json& lookup(const std::string& name) const;
    bool contains(const std::string& name) const { return bindings_.count(name) > 0; }
    const std::map<std::string, io::json>& bindings() const { return bindings_; }

    WorkspaceConfig config;

    io::json to_json() const;
    static Workspace from_json(const io::json& j);

private:
    std::map<std::string, io::json> bindings_;
};

// Decodes by type tag and encodes again.
io::json normalize(const io::json& object);

}  // namespace gfcalc
