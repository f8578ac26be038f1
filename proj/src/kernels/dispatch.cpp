#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "mexp/kernels.hpp"

namespace mexp::kernels {

bool has_inverse(Kind kind) {
    return kind == Kind::identity || kind == Kind::rotation || kind == Kind::square || kind == Kind::cat;
}

std::size_t dimension(Kind kind) { return kind == Kind::cat ? 2 : 1; }

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

namespace {

// -1 = not forced
std::atomic<int> g_forced{-1};

Isa detect() {
    if (const char* env = std::getenv("MEXP_ISA"); env && std::string_view(env) == "scalar") return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
    const int forced = g_forced.load();
    if (forced >= 0) return static_cast<Isa>(forced);
    static const Isa detected = detect();
    return detected;
}

void force_isa(std::optional<Isa> isa) {
    if (isa && !isa_available(*isa)) throw std::runtime_error("ISA " + to_string(*isa) + " not available");
    g_forced.store(isa ? static_cast<int>(*isa) : -1);
}

void survive(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out) {
    survive(spec, pass, centers, samples, out, active_isa());
}

void survive(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out, Isa isa) {
    if (pass.inverse && !has_inverse(spec.kind)) throw std::logic_error("kernel has no inverse");
    if (out.size() != samples.size() || centers.size() != samples.size())
        throw std::invalid_argument("kernel block size mismatch");
    if (dimension(spec.kind) == 2 && (centers.c1.size() != centers.size() || samples.c1.size() != samples.size()))
        throw std::invalid_argument("kernel block missing second coordinate");
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) return survive_avx2(spec, pass, centers, samples, out);
#endif
    survive_scalar(spec, pass, centers, samples, out);
}

}  // namespace mexp::kernels
