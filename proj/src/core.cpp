#include "buckdens/core.hpp"

#include <numeric>

namespace buckdens {

Natural checked_add(Natural a, Natural b) {
    Natural out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("natural addition overflows 64 bits");
    return out;
}

Natural checked_mul(Natural a, Natural b) {
    Natural out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("natural multiplication overflows 64 bits");
    return out;
}

Natural checked_pow(Natural base, unsigned exponent) {
    Natural out = 1;
    for (unsigned i = 0; i < exponent; ++i) out = checked_mul(out, base);
    return out;
}

Natural checked_lcm(Natural a, Natural b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / std::gcd(a, b), b);
}

Natural isqrt(Natural n) noexcept {
    if (n < 2) return n;
    Natural x = static_cast<Natural>(__builtin_sqrtl(static_cast<long double>(n)));
    while (x > 0 && static_cast<unsigned __int128>(x) * x > n) --x;
    while (static_cast<unsigned __int128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

ResidueClass::ResidueClass(Natural residue, Natural modulus) : r(0), m(modulus) {
    if (modulus == 0) throw DomainError("residue class modulus must be >= 1");
    r = residue % modulus;
}

std::string ResidueClass::to_string() const { return std::to_string(r) + "+(" + std::to_string(m) + ")"; }

ResidueClass ResidueClass::parse(const std::string& text) {
    const auto plus = text.find("+(");
    if (plus == std::string::npos || text.empty() || text.back() != ')')
        throw DomainError("residue class must look like r+(m): '" + text + "'");
    try {
        std::size_t used = 0;
        const std::string rs = text.substr(0, plus);
        const std::string ms = text.substr(plus + 2, text.size() - plus - 3);
        const Natural r = std::stoull(rs, &used);
        if (used != rs.size()) throw DomainError("bad residue in '" + text + "'");
        const Natural m = std::stoull(ms, &used);
        if (used != ms.size()) throw DomainError("bad modulus in '" + text + "'");
        if (r >= m) throw DomainError("residue must be below modulus in '" + text + "'");
        return ResidueClass(r, m);
    } catch (const std::logic_error&) {
        throw DomainError("bad residue class '" + text + "'");
    }
}

ResidueClass scale_class(Natural a, const ResidueClass& c) {
    if (a == 0) throw DomainError("scale factor must be >= 1");
    return ResidueClass(checked_mul(a, c.r), checked_mul(a, c.m));
}

bool is_prime(Natural p) noexcept {
    if (p < 2) return false;
    if (p < 4) return true;
    if (p % 2 == 0 || p % 3 == 0) return false;
    for (Natural d = 5; d <= p / d; d += 6)
        if (p % d == 0 || p % (d + 2) == 0) return false;
    return true;
}

void require_prime(Natural p, const char* what) {
    if (!is_prime(p)) throw DomainError(std::string(what) + ": " + std::to_string(p) + " is not prime");
}

PrimeTable::PrimeTable(std::uint32_t bound) : bound_(bound) {
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes_.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
}

const PrimeTable& PrimeTable::standard() {
    static const PrimeTable table(1'000'000);
    return table;
}

std::vector<Natural> primes_up_to(Natural bound) {
    if (bound <= PrimeTable::standard().bound()) {
        std::vector<Natural> out;
        for (auto p : PrimeTable::standard().primes()) {
            if (p > bound) break;
            out.push_back(p);
        }
        return out;
    }
    if (bound > 0xFFFFFFFFull) throw DomainError("prime bound too large");
    const PrimeTable t(static_cast<std::uint32_t>(bound));
    return {t.primes().begin(), t.primes().end()};
}

std::vector<PrimePower> factorize(Natural n) {
    if (n == 0) throw DomainError("cannot factor 0");
    std::vector<PrimePower> out;
    auto strip = [&](Natural p) {
        if (n % p != 0) return;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    };
    const auto& table = PrimeTable::standard();
    for (std::uint32_t p : table.primes()) {
        if (static_cast<Natural>(p) * p > n) break;
        strip(p);
    }
    if (n > 1) {
        Natural d = table.bound() + 1;
        if (d % 2 == 0) ++d;
        for (; d <= n / d; d += 2) strip(d);
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

unsigned valuation(Natural n, Natural p) {
    if (n == 0) throw DomainError("valuation of 0 is undefined");
    require_prime(p, "valuation");
    return detail::valuation_unchecked(n, p);
}

Natural tau(Natural n) {
    Natural out = 1;
    for (const auto& [p, e] : factorize(n)) out *= e + 1;
    return out;
}

unsigned omega(Natural n) { return static_cast<unsigned>(factorize(n).size()); }

Natural lcm_upto(unsigned N) {
    if (N == 0) throw DomainError("lcm_upto requires N >= 1");
    // lcm(1..43) fits in 64 unsigned bits but not in the signed range rationals use
    if (N > 42) throw OverflowError("lcm(1.." + std::to_string(N) + ") exceeds 2^63");
    Natural out = 1;
    for (Natural k = 2; k <= N; ++k) out = checked_lcm(out, k);
    return out;
}

} // namespace buckdens
