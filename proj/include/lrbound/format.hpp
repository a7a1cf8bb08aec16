#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace lrbound {

// All floating-point output goes through this: 12 significant digits,
// shortest form, so identical inputs produce byte-identical files.
inline std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace lrbound
