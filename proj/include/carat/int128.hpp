#pragma once

#include <cstdint>
#include <string>

namespace carat {

using i128 = __int128;

inline i128 i128_abs(i128 v) { return v < 0 ? -v : v; }

inline std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  char buf[48];
  int pos = 48;
  while (u > 0) {
    buf[--pos] = static_cast<char>('0' + static_cast<int>(u % 10));
    u /= 10;
  }
  std::string s(buf + pos, 48 - pos);
  return neg ? "-" + s : s;
}

// exact only when |v| <= 2^53; callers guard
inline double i128_to_double(i128 v) { return static_cast<double>(v); }

}  // namespace carat
