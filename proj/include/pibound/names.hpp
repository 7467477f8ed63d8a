#ifndef PIBOUND_NAMES_HPP
#define PIBOUND_NAMES_HPP

#include <compare>
#include <set>
#include <string>

namespace pibound {

/// Polarity of a name occurrence. Plus and Minus mark the two endpoints of a
/// session channel; Epsilon marks plain channels and binding occurrences.
enum class Polarity { Plus, Minus, Epsilon };

constexpr Polarity dual(Polarity p) {
    switch (p) {
    case Polarity::Plus: return Polarity::Minus;
    case Polarity::Minus: return Polarity::Plus;
    case Polarity::Epsilon: return Polarity::Epsilon;
    }
    return Polarity::Epsilon;
}

inline std::string polarity_suffix(Polarity p) {
    switch (p) {
    case Polarity::Plus: return "+";
    case Polarity::Minus: return "-";
    case Polarity::Epsilon: return "";
    }
    return "";
}

struct PolarizedName {
    std::string base;
    Polarity pol = Polarity::Epsilon;

    auto operator<=>(const PolarizedName&) const = default;

    std::string str() const { return base + polarity_suffix(pol); }
};

inline PolarizedName eps(std::string base) {
    return PolarizedName{std::move(base), Polarity::Epsilon};
}
inline PolarizedName plus(std::string base) {
    return PolarizedName{std::move(base), Polarity::Plus};
}
inline PolarizedName minus(std::string base) {
    return PolarizedName{std::move(base), Polarity::Minus};
}

/// Strips a trailing "#<digits>" freshness suffix, if any.
std::string name_root(const std::string& name);

/// Picks the first identifier root#1, root#2, ... not present in `used`, where
/// root is `base` without its freshness suffix. The chosen name is inserted
/// into `used`.
std::string fresh_name(const std::string& base, std::set<std::string>& used);

} // namespace pibound

#endif
