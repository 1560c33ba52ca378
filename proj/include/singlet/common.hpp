#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace singlet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Requested size is outside what a type supports (n out of range, memory cap).
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands disagree on dimension (state vs operator, state vs state).
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A projection onto an outcome with zero probability was requested.
struct ImpossibleOutcomeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A run needs more resources than the configuration provides
// (e.g. more surviving rounds than the source produced).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64: cheap, well-mixed 64-bit hash used to derive independent
// stream seeds from a master seed.  Independent streams keep parallel or
// reordered trials byte-reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x421f3590c89ull));
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

// Uniform integer in [0, bound) by rejection; avoids the implementation-defined
// behaviour of std::uniform_int_distribution so outputs are stable everywhere.
inline std::uint64_t bounded_rand(std::mt19937_64& g, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bounded_rand: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound);
    std::uint64_t v;
    do {
        v = g();
    } while (v >= limit);
    return v % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit_real(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Fixed-format floating point for CSV/transcript output; keeps repeated runs
// byte-identical and independent of locale.
inline std::string format_real(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

inline std::string format_fixed(double v, int decimals = 9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace singlet
