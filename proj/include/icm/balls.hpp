#pragma once

// Rigorous real and complex interval arithmetic on top of MPFR. Endpoints are
// rounded outward, so every operation returns an enclosure of the exact result.

#include <mpfr.h>

#include <string>

#include "icm/exact.hpp"

namespace icm {

/// RAII wrapper around mpfr_t.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpfr(const Mpfr& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpfr(Mpfr&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

/// Closed real interval [lo, hi].
class Interval {
  public:
    explicit Interval(mpfr_prec_t prec = 128) : lo_(prec), hi_(prec) {}
    static Interval from_rat(const Rat& x, mpfr_prec_t prec);
    static Interval from_int(long x, mpfr_prec_t prec);
    /// Interval [m - r, m + r] from a midpoint and a nonnegative radius.
    static Interval around(const Mpfr& m, const Mpfr& r, mpfr_prec_t prec);
    /// Hull of two intervals.
    static Interval hull(const Interval& a, const Interval& b);

    const Mpfr& lo() const { return lo_; }
    const Mpfr& hi() const { return hi_; }
    mpfr_prec_t prec() const { return lo_.prec(); }

    bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
    bool contains_zero() const { return !certainly_positive() && !certainly_negative(); }
    bool contains(const Rat& x) const;
    /// Certainly a < b.
    friend bool certainly_less(const Interval& a, const Interval& b) { return mpfr_less_p(a.hi_.get(), b.lo_.get()); }
    friend bool overlaps(const Interval& a, const Interval& b) {
        return !certainly_less(a, b) && !certainly_less(b, a);
    }
    double mid_double() const;
    double width_double() const;
    /// Upper bound of |x| over the interval.
    Mpfr mag() const;
    std::string str() const;

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    friend Interval sqr(const Interval& a);
    friend Interval sqrt(const Interval& a);
    friend Interval log(const Interval& a);
    friend Interval exp(const Interval& a);
    friend Interval abs(const Interval& a);

  private:
    Mpfr lo_, hi_;
};

bool certainly_less(const Interval& a, const Interval& b);
bool overlaps(const Interval& a, const Interval& b);

/// Rectangular complex interval.
struct CInterval {
    Interval re, im;
    explicit CInterval(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    CInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    static CInterval from_rat(const Rat& x, mpfr_prec_t prec);
    CInterval conj() const { return {re, -im}; }
    Interval norm2() const { return sqr(re) + sqr(im); }
    bool overlaps(const CInterval& o) const { return icm::overlaps(re, o.re) && icm::overlaps(im, o.im); }
    friend CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }
    friend CInterval operator-(const CInterval& a, const CInterval& b) { return {a.re - b.re, a.im - b.im}; }
    friend CInterval operator*(const CInterval& a, const CInterval& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CInterval operator/(const CInterval& a, const CInterval& b);
};

}  // namespace icm
