#include "superstab/rational.hpp"

namespace superstab {

BigInt integer_kth_root_floor(const BigInt& v, unsigned k) {
    if (v < 0) throw std::domain_error("integer_kth_root_floor: negative input");
    if (k == 0) throw std::domain_error("integer_kth_root_floor: zero index");
    if (v == 0 || v == 1 || k == 1) return v;
    BigInt lo = 1, hi = 1;
    while (boost::multiprecision::pow(hi, k) <= v) hi <<= 1;
    // invariant: lo^k <= v < hi^k
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, k) <= v)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::optional<Rational> exact_kth_root(const Rational& q, unsigned k) {
    if (q < 0) return std::nullopt;
    if (k == 1) return q;
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt rn = integer_kth_root_floor(num, k);
    BigInt rd = integer_kth_root_floor(den, k);
    if (boost::multiprecision::pow(rn, k) != num) return std::nullopt;
    if (boost::multiprecision::pow(rd, k) != den) return std::nullopt;
    return Rational(rn, rd);
}

}  // namespace superstab
