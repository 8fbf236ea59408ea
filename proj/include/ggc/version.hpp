#ifndef GGC_VERSION_HPP
#define GGC_VERSION_HPP

namespace ggc {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // GGC_VERSION_HPP
