#pragma once

// Batched orbit-separation kernels for the closed-form zoo maps.
//
// A kernel advances a block of (center, sample) pairs under f (or f^-1) and
// counts, per pair, how many consecutive comparisons d(center_i, sample_i) <= delta
// succeed before the first failure. Every variant performs the same IEEE
// operations in the same order, so scalar and vector results are identical.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace mexp::kernels {

enum class Kind : std::uint8_t {
    identity,  // circle, x
    rotation,  // circle, x + alpha
    doubling,  // circle, 2x
    tent,      // interval, 1 - |2x - 1|
    square,    // interval, x^2
    cat,       // torus, [[2,1],[1,1]]
};

struct Spec {
    Kind kind = Kind::identity;
    double alpha = 0.0;
    int power = 1;
};

bool has_inverse(Kind kind);
std::size_t dimension(Kind kind);

enum class Isa : std::uint8_t { scalar, avx2 };

std::string to_string(Isa isa);
bool isa_available(Isa isa);

/// The variant used by `survive`. Defaults to the best available ISA;
/// the environment variable MEXP_ISA=scalar forces the reference path.
Isa active_isa();
void force_isa(std::optional<Isa> isa);

/// Structure-of-arrays block of points. Only `c0` is used for 1-D kinds.
struct Block {
    std::span<double> c0;
    std::span<double> c1;
    std::size_t size() const { return c0.size(); }
};

struct Pass {
    bool inverse = false;     // step with f^-1
    bool step_first = false;  // step before the first comparison
    double delta = 0.0;
    int max_steps = 0;
};

/// out[j] = number of leading successful comparisons for pair j (0..max_steps).
/// Both blocks are advanced in place and left in an unspecified state.
void survive(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out);
void survive(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out, Isa isa);

void survive_scalar(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out);
#if defined(__x86_64__) || defined(_M_X64)
void survive_avx2(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out);
#endif

}  // namespace mexp::kernels
