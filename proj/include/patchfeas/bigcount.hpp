#pragma once

#include <gmpxx.h>

#include <string>

namespace patchfeas {

// Exact nonnegative integer with a log10 view. Region-count bounds routinely
// exceed 10^10000, so everything is kept exact and magnitudes are derived.
class BigCount {
public:
    BigCount() : v_(0) {}
    explicit BigCount(unsigned long v) : v_(v) {}
    explicit BigCount(mpz_class v) : v_(std::move(v)) {}

    static BigCount one() { return BigCount(1UL); }
    static BigCount from_decimal(const std::string& s) { return BigCount(mpz_class(s)); }
    static BigCount pow(unsigned long base, unsigned long exp);

    const mpz_class& value() const { return v_; }

    BigCount& operator+=(const BigCount& o) { v_ += o.v_; return *this; }
    BigCount& operator*=(const BigCount& o) { v_ *= o.v_; return *this; }
    friend BigCount operator+(BigCount a, const BigCount& b) { a += b; return a; }
    friend BigCount operator*(BigCount a, const BigCount& b) { a *= b; return a; }

    auto operator<=>(const BigCount& o) const { return cmp(v_, o.v_) <=> 0; }
    bool operator==(const BigCount& o) const { return v_ == o.v_; }

    bool is_zero() const { return v_ == 0; }

    // Number of decimal digits (1 for zero).
    long digits() const;

    // log10 of the value; exact enough that floor(log10())+1 == digits().
    // Undefined for zero.
    double log10() const;
    long log10_floor() const { return digits() - 1; }
    double log10_frac() const { return log10() - static_cast<double>(log10_floor()); }

    std::string to_string() const { return v_.get_str(); }

private:
    mpz_class v_;
};

}  // namespace patchfeas
