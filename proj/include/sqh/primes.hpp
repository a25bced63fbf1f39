#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace sqh {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, as (prime, exponent) pairs.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// Largest power of p dividing n.
std::uint64_t p_part(std::uint64_t n, std::uint64_t p);

/// Uniformly drawn prime in [2^(bits-1), 2^bits).
std::uint64_t random_prime(std::mt19937_64& rng, int bits);

}  // namespace sqh
