#pragma once

#include <string>
#include <string_view>

namespace divref::metrics {

// Porter (1980) suffix stripping. Words that are not pure lowercase ASCII
// letters, and words of length <= 2, are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace divref::metrics
