#pragma once

#include <cstdint>

#include "shnr/space.hpp"

namespace shnr {

// Brute-force sampling oracles. Each draws `samples` vectors x uniformly on the
// A-unit sphere of R(A) and evaluates the defining supremum or infimum directly
// with the n x n matrices A and T, without going through the compression.
// Sampled suprema are lower bounds and sampled infima upper bounds. Results are
// deterministic for a fixed seed and independent of the thread count.

double oracle_sample_wA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed);
double oracle_sample_cA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed);
double oracle_sample_normA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed);
/// inf |<Tx, x>_A| / (||Tx||_A ||x||_A) over sampled x with Tx outside N(A).
double oracle_sample_cosA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed);

}  // namespace shnr
