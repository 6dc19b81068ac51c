#pragma once

#include <map>
#include <stdexcept>
#include <vector>

namespace wlforge {

// A total assignment from domain elements to compact color ids 0..num_colors-1.
// Canonical form: the first occurrence of each id appears in ascending id
// order, so equal partitions have identical representations.
class Coloring {
public:
    Coloring() = default;

    int domain_size() const { return static_cast<int>(colors_.size()); }
    int num_colors() const { return num_colors_; }
    int color(int i) const { return colors_[i]; }
    const std::vector<int>& colors() const { return colors_; }

    std::vector<long long> class_sizes() const {
        std::vector<long long> sizes(num_colors_, 0);
        for (int c : colors_) ++sizes[c];
        return sizes;
    }

    bool operator==(const Coloring&) const = default;

    // Internal: callers must pass a canonical id vector.
    static Coloring from_canonical(std::vector<int> colors, int num_colors) {
        Coloring c;
        c.colors_ = std::move(colors);
        c.num_colors_ = num_colors;
        return c;
    }

private:
    std::vector<int> colors_;
    int num_colors_ = 0;
};

// Injective re-indexing of arbitrary ordered tokens into canonical form:
// equal tokens map to equal ids, first occurrences get ascending ids.
template <class Token>
Coloring canonicalize(const std::vector<Token>& tokens) {
    std::map<Token, int> ids;
    std::vector<int> colors;
    colors.reserve(tokens.size());
    for (const Token& t : tokens) {
        auto [it, inserted] = ids.try_emplace(t, static_cast<int>(ids.size()));
        colors.push_back(it->second);
    }
    return Coloring::from_canonical(std::move(colors), static_cast<int>(ids.size()));
}

// True iff c(v) = c(w) implies d(v) = d(w) for all v, w; i.e. c's partition is
// at least as fine as d's.
inline bool refines(const Coloring& c, const Coloring& d) {
    if (c.domain_size() != d.domain_size())
        throw std::invalid_argument("refines: mismatched domains");
    std::vector<int> image(c.num_colors(), -1);
    for (int v = 0; v < c.domain_size(); ++v) {
        int& img = image[c.color(v)];
        if (img == -1)
            img = d.color(v);
        else if (img != d.color(v))
            return false;
    }
    return true;
}

// Mutual refinement; by canonicality this is identity of representations.
inline bool equivalent(const Coloring& c, const Coloring& d) {
    if (c.domain_size() != d.domain_size())
        throw std::invalid_argument("equivalent: mismatched domains");
    return c == d;
}

}  // namespace wlforge
