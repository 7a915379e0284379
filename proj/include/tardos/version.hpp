#pragma once

namespace tardos {

inline constexpr const char* version_string = "tardos-0.1.0";

}
