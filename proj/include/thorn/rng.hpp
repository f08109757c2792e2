#pragma once

#include <cstdint>

#include "thorn/vec3.hpp"

namespace thorn {

// Counter-based per-path random streams: path i draws from a generator seeded
// by mixing (seed XOR i), so estimates do not depend on how paths are
// scheduled across worker threads.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class PathRng {
  public:
    PathRng(uint64_t seed, uint64_t path_index) {
        uint64_t sm = seed ^ path_index;
        // xoshiro256++ state must not be all zero; splitmix output never is.
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one value cached per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 gauss3() { return {normal(), normal(), normal()}; }

    Vec3 unit_sphere() {
        for (;;) {
            Vec3 g = gauss3();
            double n = norm(g);
            if (n > 1e-12) return (1.0 / n) * g;
        }
    }

    // Uniform direction on the unit circle (for planar walks).
    void unit_circle(double& cx, double& cy) {
        const double a = 6.283185307179586476925286766559 * uniform();
        cx = std::cos(a);
        cy = std::sin(a);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace thorn
