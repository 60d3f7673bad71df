#include "icm/balls.hpp"

#include <sstream>

namespace icm {

namespace {
constexpr const char* kModule = "algebra";

mpfr_prec_t pmax(const Interval& a, const Interval& b) { return std::max(a.prec(), b.prec()); }

void set_rat(mpfr_ptr r, const Rat& x, mpfr_rnd_t rnd) { mpfr_set_q(r, x.get_mpq_t(), rnd); }
}  // namespace

Interval Interval::from_rat(const Rat& x, mpfr_prec_t prec) {
    Interval r(prec);
    set_rat(r.lo_.get(), x, MPFR_RNDD);
    set_rat(r.hi_.get(), x, MPFR_RNDU);
    return r;
}

Interval Interval::from_int(long x, mpfr_prec_t prec) { return from_rat(Rat(x), prec); }

Interval Interval::around(const Mpfr& m, const Mpfr& rad, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_sub(r.lo_.get(), m.get(), rad.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), m.get(), rad.get(), MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    Interval r(pmax(a, b));
    mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

bool Interval::contains(const Rat& x) const {
    return mpfr_cmp_q(lo_.get(), x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), x.get_mpq_t()) >= 0;
}

double Interval::mid_double() const { return (lo_.to_double() + hi_.to_double()) / 2; }

double Interval::width_double() const {
    Mpfr w(prec());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

Mpfr Interval::mag() const {
    Mpfr a(prec()), b(prec());
    mpfr_abs(a.get(), lo_.get(), MPFR_RNDU);
    mpfr_abs(b.get(), hi_.get(), MPFR_RNDU);
    mpfr_max(a.get(), a.get(), b.get(), MPFR_RNDU);
    return a;
}

std::string Interval::str() const {
    std::ostringstream os;
    os << '[' << lo_.to_double() << ", " << hi_.to_double() << ']';
    return os.str();
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(pmax(a, b));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(pmax(a, b));
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a) {
    Interval r(a.prec());
    mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t p = pmax(a, b);
    Interval r(p);
    Mpfr t(p);
    const mpfr_srcptr xs[2] = {a.lo_.get(), a.hi_.get()};
    const mpfr_srcptr ys[2] = {b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : xs)
        for (auto y : ys) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw Error(ErrorKind::PrecisionInsufficient, kModule, "interval division by a range containing 0");
    const mpfr_prec_t p = pmax(a, b);
    Interval inv(p);
    mpfr_ui_div(inv.lo_.get(), 1, b.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(inv.hi_.get(), 1, b.lo_.get(), MPFR_RNDU);
    return a * inv;
}

Interval sqr(const Interval& a) {
    Interval r = abs(a);
    Interval s(a.prec());
    mpfr_sqr(s.lo_.get(), r.lo_.get(), MPFR_RNDD);
    mpfr_sqr(s.hi_.get(), r.hi_.get(), MPFR_RNDU);
    return s;
}

Interval sqrt(const Interval& a) {
    if (a.certainly_negative()) throw Error(ErrorKind::InvariantBreach, kModule, "sqrt of a negative interval");
    Interval r(a.prec());
    if (mpfr_sgn(a.lo_.get()) <= 0) mpfr_set_zero(r.lo_.get(), 1);
    else mpfr_sqrt(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
}

Interval log(const Interval& a) {
    if (!a.certainly_positive()) throw Error(ErrorKind::PrecisionInsufficient, kModule, "log of an interval touching 0");
    Interval r(a.prec());
    mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
}

Interval exp(const Interval& a) {
    Interval r(a.prec());
    mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
}

Interval abs(const Interval& a) {
    if (mpfr_sgn(a.lo_.get()) >= 0) return a;
    if (mpfr_sgn(a.hi_.get()) <= 0) return -a;
    Interval r(a.prec());
    mpfr_set_zero(r.lo_.get(), 1);
    r.hi_ = a.mag();
    return r;
}

CInterval CInterval::from_rat(const Rat& x, mpfr_prec_t prec) {
    return {Interval::from_rat(x, prec), Interval::from_int(0, prec)};
}

CInterval operator/(const CInterval& a, const CInterval& b) {
    const Interval n = b.norm2();
    const CInterval num = a * b.conj();
    return {num.re / n, num.im / n};
}

}  // namespace icm
