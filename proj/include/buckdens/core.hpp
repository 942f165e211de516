#pragma once

// Integer and residue-class primitives shared by the rest of the library.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "buckdens/errors.hpp"

namespace buckdens {

/// Elements of the naturals and moduli. Arithmetic that would leave 64 bits
/// goes through the checked_* helpers and raises OverflowError.
using Natural = std::uint64_t;

Natural checked_add(Natural a, Natural b);
Natural checked_mul(Natural a, Natural b);
Natural checked_pow(Natural base, unsigned exponent);
Natural checked_lcm(Natural a, Natural b);

/// Integer square root (floor).
Natural isqrt(Natural n) noexcept;

/// The arithmetic progression r+(m) = { n : n = r (mod m) } with 0 <= r < m.
struct ResidueClass {
    Natural r = 0;
    Natural m = 1;

    ResidueClass() = default;
    /// Reduces r modulo m; m must be at least 1.
    ResidueClass(Natural residue, Natural modulus);

    bool contains(Natural n) const noexcept { return n % m == r; }
    std::string to_string() const;

    /// Accepts "r+(m)".
    static ResidueClass parse(const std::string& text);

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
    friend auto operator<=>(const ResidueClass& a, const ResidueClass& b) {
        if (auto c = a.m <=> b.m; c != 0) return c;
        return a.r <=> b.r;
    }
};

/// Image of c under multiplication by a: (a r)+(a m).
ResidueClass scale_class(Natural a, const ResidueClass& c);

/// Deterministic trial division up to sqrt(p).
bool is_prime(Natural p) noexcept;

/// Throws DomainError unless p is prime.
void require_prime(Natural p, const char* what);

/// Primes up to a fixed bound, sieved once.
class PrimeTable {
public:
    explicit PrimeTable(std::uint32_t bound);

    std::uint32_t bound() const noexcept { return bound_; }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }

    /// Shared table up to 10^6 used by factorize().
    static const PrimeTable& standard();

private:
    std::uint32_t bound_;
    std::vector<std::uint32_t> primes_;
};

/// All primes <= bound (fresh sieve).
std::vector<Natural> primes_up_to(Natural bound);

struct PrimePower {
    Natural p;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization by trial division over the standard prime table,
/// continuing with odd trial divisors past the table when needed.
std::vector<PrimePower> factorize(Natural n);

/// Largest e with p^e | n.
unsigned valuation(Natural n, Natural p);

/// Number of divisors via prod (alpha_i + 1).
Natural tau(Natural n);

/// Number of distinct prime factors.
unsigned omega(Natural n);

/// lcm(1, ..., N); N > 42 overflows.
Natural lcm_upto(unsigned N);

namespace detail {
/// valuation() without argument checks, for hot membership loops.
inline unsigned valuation_unchecked(Natural n, Natural p) noexcept {
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}
} // namespace detail

} // namespace buckdens
