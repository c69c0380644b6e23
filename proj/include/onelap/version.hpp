#ifndef ONELAP_VERSION_HPP_
#define ONELAP_VERSION_HPP_

#define ONELAP_VERSION_MAJOR 0
#define ONELAP_VERSION_MINOR 1
#define ONELAP_VERSION_PATCH 0
#define ONELAP_VERSION_STRING "0.1.0"

namespace onelap {
inline const char* version() { return ONELAP_VERSION_STRING; }
}

#endif
