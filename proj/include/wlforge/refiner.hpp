#pragma once

#include <string>

namespace wlforge {

enum class KwlVariant { tuple, set_combined, set_split, set_local };

// Which refinement drives a run: plain color refinement or a k-dimensional
// variant. Shared by distinguish, kernels and the CLI.
struct RefinerConfig {
    enum class Kind { wl1, kwl };
    Kind kind = Kind::wl1;
    int k = 2;
    KwlVariant variant = KwlVariant::set_split;
};

std::string to_string(KwlVariant v);
std::string to_string(const RefinerConfig& c);
KwlVariant kwl_variant_from_string(const std::string& s);

}  // namespace wlforge
