#pragma once

// Isogeny labels, the ideal class monoid ICM(R) and its labelled classes.

#include <memory>
#include <string>

#include "icm/weakeq.hpp"

namespace icm {

/// Base-26 letters a=0..z=25; negatives carry an extra leading "a".
std::string encode_int(const Int& n);
Int decode_int(const std::string& s);

/// "g.q.c_1_..._c_g" from h (ascending coefficients).
std::string encode_isog(int g, const Int& q, const std::vector<Int>& a);
std::string isog_label(const WeilInput& in);

struct DecodedIsog {
    int g = 0;
    Int q;
    std::vector<Int> a;  ///< a_1..a_g
    ZPoly h;             ///< ascending, expanded by the functional equation
};
DecodedIsog decode_isog(const std::string& label);

struct ClassRecord {
    std::string isog;
    std::size_t order = 0;  ///< index into the overorder list
    long w = 1;
    long j = 1;
    Lattice rep;
    std::string order_label() const;
    std::string label() const;  ///< N.i.w.j
    std::string full_label() const;
    Int N;
    long i = 1;
};

struct IcmOptions {
    Int max_index = 1000000;
};

/// Everything needed to label the ideal classes of one Frobenius order.
class IsogenyClass {
  public:
    IsogenyClass(const WeilInput& in, const std::vector<FieldData>& pool, const IcmOptions& opt = {});
    IsogenyClass(const IsogenyClass&) = delete;
    IsogenyClass& operator=(const IsogenyClass&) = delete;

    const AlgebraContext& ctx() const { return *ctx_; }
    const MaximalOrderData& maximal() const { return *mo_; }
    const IsoTester& iso() const { return *iso_; }
    const std::string& isog() const { return isog_; }
    const std::vector<OverorderRecord>& orders() const { return orders_; }
    const std::vector<MaxIdeal>& pic_generators() const { return pgens_; }
    const std::vector<PicGroup>& pics() const { return pics_; }
    const std::vector<std::vector<WeakClass>>& weak() const { return weak_; }
    /// ICM(R) sorted by (N, i, w, j).
    const std::vector<ClassRecord>& records() const { return records_; }

    /// The labelled class of a fractional R-ideal.
    const ClassRecord& classify(const Lattice& I) const;

  private:
    std::unique_ptr<AlgebraContext> ctx_;
    std::unique_ptr<MaximalOrderData> mo_;
    std::unique_ptr<IsoTester> iso_;
    std::string isog_;
    std::vector<OverorderRecord> orders_;
    std::vector<MaxIdeal> pgens_;
    std::vector<PicGroup> pics_;
    std::vector<std::vector<WeakClass>> weak_;
    std::vector<ClassRecord> records_;
    std::vector<std::size_t> first_record_;  ///< per order
};

}  // namespace icm
