#ifndef KP_UTIL_HPP
#define KP_UTIL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

// DOMAIN_CHECK: caller handed us invalid data.
// LOGIC_CHECK: an internal invariant failed; a bug, not bad input.
#define DOMAIN_CHECK(condition, what) \
  { if (!(condition)) throw std::domain_error(std::string(what) + "  (" #condition ")"); }
#define LOGIC_CHECK(condition, what) \
  { if (!(condition)) throw std::logic_error(std::string(what) + "  (" #condition ")"); }

namespace kp {

typedef int64_t Int;

// Errors that commands surface to the user as "fail" certificates rather than crashes.
struct CheckError : std::runtime_error {
  std::string code;
  CheckError(const std::string& code_, const std::string& what_)
      : std::runtime_error(code_ + ": " + what_), code(code_) {}
};

inline Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) { Int t = a % b; a = b; b = t; }
  return a;
}

inline Int lcm_int(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_int(a, b) * b;
}

// Euler phi by trial division; orders stay small enough that this is never hot.
inline Int euler_phi(Int n) {
  LOGIC_CHECK(n >= 1, "euler_phi needs n >= 1");
  Int result = n;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline Int mod_positive(Int a, Int m) {
  LOGIC_CHECK(m > 0, "mod_positive needs m > 0");
  Int r = a % m;
  return r < 0 ? r + m : r;
}

// Deterministic splitmix64; the state walk is fixed by the seed alone, so every
// platform replays the same test corpus.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform on [0, bound), bound >= 1, by rejection
  uint64_t below(uint64_t bound) {
    LOGIC_CHECK(bound >= 1, "Rng::below needs bound >= 1");
    uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % bound);
    uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }
  Int range(Int lo, Int hi) {  // inclusive ends
    LOGIC_CHECK(lo <= hi, "Rng::range needs lo <= hi");
    return lo + Int(below(uint64_t(hi - lo + 1)));
  }
};

}  // namespace kp

#endif
