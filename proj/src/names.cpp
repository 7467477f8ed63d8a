#include "pibound/names.hpp"

#include <cctype>

namespace pibound {

std::string name_root(const std::string& name) {
    auto pos = name.rfind('#');
    if (pos == std::string::npos || pos + 1 >= name.size())
        return name;
    for (std::size_t i = pos + 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
            return name;
    return name.substr(0, pos);
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    std::string root = name_root(base);
    if (!used.count(root)) {
        used.insert(root);
        return root;
    }
    for (unsigned long k = 1;; ++k) {
        std::string candidate = root + "#" + std::to_string(k);
        if (!used.count(candidate)) {
            used.insert(candidate);
            return candidate;
        }
    }
}

} // namespace pibound
