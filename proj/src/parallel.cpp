#include "wwb/parallel.hpp"

#include <cstdlib>
#include <string>

namespace wwb {

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("WWB_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long cap = std::stol(env);
      if (cap >= 1 && static_cast<unsigned long>(cap) < n) n = static_cast<unsigned>(cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

}  // namespace wwb
