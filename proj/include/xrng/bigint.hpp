#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace xrng {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(unsigned e) {
    BigInt r = 1;
    r <<= e;
    return r;
}

inline BigInt mersenne(unsigned n) { return pow2(n) - 1; }

// Accepts decimal, 0x-hex, or "2^N" / "2^N-1" shorthand.
inline BigInt parse_bigint(const std::string& text) {
    auto caret = text.find('^');
    if (caret != std::string::npos && text.substr(0, caret) == "2") {
        std::string rest = text.substr(caret + 1);
        long long offset = 0;
        auto sign = rest.find_first_of("+-");
        if (sign != std::string::npos) {
            offset = std::stoll(rest.substr(sign));
            rest = rest.substr(0, sign);
        }
        BigInt r = pow2(static_cast<unsigned>(std::stoul(rest)));
        return r + offset;
    }
    return BigInt(text);
}

}  // namespace xrng
