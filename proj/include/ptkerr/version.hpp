#ifndef PTKERR_VERSION_HPP
#define PTKERR_VERSION_HPP

namespace ptkerr {
inline constexpr const char* version = "0.1.0";
}

#endif
