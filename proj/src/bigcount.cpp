#include "patchfeas/bigcount.hpp"

#include <cmath>
#include <stdexcept>

namespace patchfeas {

BigCount BigCount::pow(unsigned long base, unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return BigCount(r);
}

long BigCount::digits() const {
    if (v_ == 0) return 1;
    // sizeinbase may overestimate by one; settle it exactly.
    long d = static_cast<long>(mpz_sizeinbase(v_.get_mpz_t(), 10));
    if (d > 1) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(d - 1));
        if (v_ < p) --d;
    }
    return d;
}

double BigCount::log10() const {
    if (v_ == 0) throw std::domain_error("log10 of zero");
    long d = digits();
    // Take the leading <=17 digits as a double mantissa.
    long shift = d > 17 ? d - 17 : 0;
    mpz_class q = v_;
    if (shift > 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        q /= p;
    }
    return static_cast<double>(shift) + std::log10(q.get_d());
}

}  // namespace patchfeas
