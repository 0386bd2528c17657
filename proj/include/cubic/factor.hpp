#pragma once

// Integer factorization sized for discriminants: bounded trial division,
// then deterministic Miller-Rabin plus Brent's cycle variant of Pollard rho
// with a fixed parameter schedule, so results are reproducible.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "cubic/base.hpp"

namespace cubic {

namespace detail {

inline Int mulmod(const Int& a, const Int& b, const Int& n) { return a * b % n; }

inline Int powmod(Int base, Int exp, const Int& n) {
    Int result = 1;
    base %= n;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, n);
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    return result;
}

// Deterministic for n < 3.3 * 10^24 with this base set.
inline bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Brent's improvement of Pollard rho; the polynomial offset c advances on
// failure, giving a deterministic schedule.
inline Int pollard_brent(const Int& n) {
    if (n % 2 == 0) return 2;
    for (Int c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        Int q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = (mulmod(y, y, n) + c) % n;
            int k = 0;
            while (k < lam && d == 1) {
                Int ys = y;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    Int diff = x > y ? x - y : y - x;
                    if (diff != 0) q = mulmod(q, diff, n);
                }
                d = gcd(q, n);
                if (d == 1) { k += lim; continue; }
                if (d == n) {
                    // Backtrack one step at a time to recover the factor.
                    d = 1;
                    while (d == 1) {
                        ys = (mulmod(ys, ys, n) + c) % n;
                        Int diff = x > ys ? x - ys : ys - x;
                        d = diff == 0 ? n : gcd(diff, n);
                    }
                    break;
                }
                break;
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

}  // namespace detail

// Factorization of a nonzero integer as sorted (prime, exponent) pairs, with
// a leading (-1, 1) for negative inputs.  `budget` caps the number of trial
// divisors probed before switching to rho; exceeding the budget with a
// remainder that rho cannot be trusted on raises FactorBudgetError.
inline std::vector<std::pair<Int, int>> factor_integer(const Int& n_in,
                                                       std::uint64_t budget = 1000000) {
    if (n_in == 0) throw DomainError("factor_integer: zero has no factorization");
    std::vector<std::pair<Int, int>> out;
    Int n = n_in;
    if (n < 0) {
        out.emplace_back(-1, 1);
        n = -n;
    }
    std::map<Int, int> primes;
    std::uint64_t used = 0;
    auto strip = [&](const Int& d) {
        while (n % d == 0) { ++primes[d]; n /= d; }
    };
    for (Int d : {Int(2), Int(3), Int(5)}) {
        if (++used > budget) break;
        strip(d);
    }
    for (Int d = 7; d * d <= n && used <= budget; d += 6) {
        used += 2;
        strip(d);
        strip(d + 4);
    }
    // Remaining part is prime, 1, or needs rho splitting.
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (detail::is_probable_prime(m)) {
            ++primes[m];
            continue;
        }
        if (m < Int("1000000000000000000000000")) {
            Int d = detail::pollard_brent(m);
            stack.push_back(d);
            stack.push_back(m / d);
        } else {
            std::vector<std::pair<Int, int>> partial(out);
            for (auto& [p, e] : primes) partial.emplace_back(p, e);
            throw FactorBudgetError("factor_integer: budget exhausted on " + n_in.str(),
                                    partial, m);
        }
    }
    for (auto& [p, e] : primes) out.emplace_back(p, e);
    return out;
}

}  // namespace cubic
