#include "deltachi/io.hpp"

#include <charconv>
#include <cmath>

namespace deltachi {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hexd = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hexd[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace deltachi
