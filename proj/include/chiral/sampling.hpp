#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "chiral/core.hpp"

namespace chiral {

/// SplitMix64 finalizer; used to derive independent per-check seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for a named stream: FNV-1a of the name mixed with the parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

/// Seeded source of test points: coordinates uniform in [-2, 2], with p0
/// redrawn until |p0| >= 0.1 (the regular part of phase space).
///
/// Uniform doubles are built from the raw 64-bit engine output, so a given
/// seed produces the same sequence on every standard library.
class Sampler {
 public:
  static constexpr double kBox = 2.0;
  static constexpr double kMinMomentum = 0.1;

  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  Sampler(std::uint64_t seed, std::string_view stream) : engine_(derive_seed(seed, stream)) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  double coordinate() { return uniform(-kBox, kBox); }
  Vec2 vec2() { return {coordinate(), coordinate()}; }

  Vec2 momentum() {
    for (;;) {
      const Vec2 p = vec2();
      if (norm_sq(p) >= kMinMomentum * kMinMomentum) return p;
    }
  }

  FullState full_state() {
    FullState z;
    z.pos = vec2();
    z.vel = vec2();
    z.p0 = momentum();
    z.p1 = vec2();
    return z;
  }

  FullState surface_state(const Params& params) {
    const Vec2 pos = vec2();
    const Vec2 vel = vec2();
    return on_surface(pos, vel, momentum(), params);
  }

  ReducedState reduced_state() {
    ReducedState s;
    s.jr = coordinate();
    s.jx = coordinate();
    s.jy = coordinate();
    s.lsq = norm_sq(momentum());
    return s;
  }

  Vector vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = coordinate();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chiral
