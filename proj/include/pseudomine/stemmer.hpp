#pragma once

#include <string>
#include <string_view>

namespace pseudomine::topics {

/// Porter's suffix-stripping stemmer, following his reference C release
/// (including its "bli" and "logi" rules). Expects a lowercase ASCII word;
/// words of one or two letters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace pseudomine::topics
