#include "hdx/caps.hpp"

#include "hdx/errors.hpp"

#include <boost/algorithm/string.hpp>

#include <vector>

namespace hdx {

Caps Caps::parse(const std::string& overrides) { return parse(overrides, Caps{}); }

Caps Caps::parse(const std::string& overrides, Caps base) {
    std::vector<std::string> items;
    boost::split(items, overrides, boost::is_any_of(","), boost::token_compress_on);
    for (auto item : items) {
        boost::trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw MalformedInput("cap override needs key=value: " + item);
        const std::string key = item.substr(0, eq);
        std::uint64_t value = 0;
        try {
            value = std::stoull(item.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw MalformedInput("cap value is not a number: " + item);
        }
        if (value == 0) throw MalformedInput("caps must be positive: " + item);
        if (key == "group") base.group_order = value;
        else if (key == "subspaces") base.subspace_count = value;
        else if (key == "configs") base.configurations = value;
        else if (key == "solver") base.solver_faces = value;
        else if (key == "iso") base.isomorphism_steps = value;
        else if (key == "jacobi") base.jacobi_size = value;
        else throw MalformedInput("unknown cap key: " + key);
    }
    return base;
}

}  // namespace hdx
