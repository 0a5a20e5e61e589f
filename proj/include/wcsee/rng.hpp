// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_RNG_HPP
#define WCSEE_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

#include "wcsee/types.hpp"

namespace wcsee {

// Splittable random stream. Children are derived from (seed, tag) by hashing,
// so drawing from one child never shifts the sequence of another.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed = 0);

    std::uint64_t seed() const { return seed_; }

    RngStream split(std::string_view tag) const;
    RngStream split(std::uint64_t index) const;
    RngStream split(std::string_view tag, std::uint64_t index) const;

    double uniform();  // [0, 1)
    double uniform(double lo, double hi);
    double normal();   // N(0, 1)
    cplx complex_normal();  // CN(0, 1): real and imaginary parts N(0, 1/2)
    std::uint64_t next_u64() { return engine_(); }
    std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)

    std::mt19937_64& engine() { return engine_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace wcsee

#endif
