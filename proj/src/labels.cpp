#include "icm/labels.hpp"

#include <algorithm>
#include <sstream>

namespace icm {

namespace {

const char* const kModule = "icm-labels";

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedLabel, kModule, what); }

Int parse_positive(const std::string& s, const std::string& what) {
    if (s.empty() || s.size() > 40 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        (s.size() > 1 && s[0] == '0'))
        malformed("bad " + what + " '" + s + "'");
    Int v(s);
    if (v <= 0) malformed(what + " must be positive");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string encode_nonneg(Int n) {
    if (n == 0) return "a";
    std::string out;
    while (n > 0) {
        Int r = n % 26;
        out.push_back(static_cast<char>('a' + r.get_si()));
        n /= 26;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

std::string encode_int(const Int& n) { return n < 0 ? "a" + encode_nonneg(-n) : encode_nonneg(n); }

Int decode_int(const std::string& s) {
    if (s.empty()) malformed("empty coefficient");
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
        malformed("coefficient '" + s + "' has characters outside a-z");
    bool neg = false;
    std::string body = s;
    if (s.size() > 1 && s[0] == 'a') {
        neg = true;
        body = s.substr(1);
        if (body[0] == 'a') malformed("coefficient '" + s + "' has a leading zero digit");
    }
    Int v = 0;
    for (char c : body) v = v * 26 + (c - 'a');
    if (neg && v == 0) malformed("negative zero");
    return neg ? Int(-v) : v;
}

std::string encode_isog(int g, const Int& q, const std::vector<Int>& a) {
    std::string out = std::to_string(g) + "." + q.get_str() + ".";
    for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "_" : "") + encode_int(a[i]);
    return out;
}

std::string isog_label(const WeilInput& in) {
    std::vector<Int> a;
    const std::size_t n = in.h.size() - 1;
    for (int i = 1; i <= in.g; ++i) a.push_back(in.h[n - static_cast<std::size_t>(i)]);
    return encode_isog(in.g, in.q, a);
}

DecodedIsog decode_isog(const std::string& label) {
    const auto parts = split(label, '.');
    if (parts.size() != 3) malformed("expected g.q.coefficients in '" + label + "'");
    DecodedIsog d;
    const Int g = parse_positive(parts[0], "dimension");
    if (g > 64) malformed("dimension too large");
    d.g = static_cast<int>(g.get_si());
    d.q = parse_positive(parts[1], "field size");
    const auto coeffs = split(parts[2], '_');
    if (coeffs.size() != static_cast<std::size_t>(d.g))
        malformed("expected " + std::to_string(d.g) + " coefficients in '" + label + "'");
    for (const auto& c : coeffs) d.a.push_back(decode_int(c));
    const std::size_t n = 2 * static_cast<std::size_t>(d.g);
    d.h.assign(n + 1, 0);
    d.h[n] = 1;
    for (int i = 1; i <= d.g; ++i) {
        d.h[n - static_cast<std::size_t>(i)] = d.a[static_cast<std::size_t>(i - 1)];
        if (i < d.g) {
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), d.q.get_mpz_t(), static_cast<unsigned long>(d.g - i));
            d.h[static_cast<std::size_t>(i)] = pw * d.a[static_cast<std::size_t>(i - 1)];
        }
    }
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), d.q.get_mpz_t(), static_cast<unsigned long>(d.g));
    d.h[0] = pw;
    if (encode_isog(d.g, d.q, d.a) != label) malformed("label '" + label + "' is not in canonical form");
    return d;
}

std::string ClassRecord::order_label() const { return N.get_str() + "." + std::to_string(i); }

std::string ClassRecord::label() const { return order_label() + "." + std::to_string(w) + "." + std::to_string(j); }

std::string ClassRecord::full_label() const { return isog + "-" + label(); }

IsogenyClass::IsogenyClass(const WeilInput& in, const std::vector<FieldData>& pool, const IcmOptions& opt) {
    ctx_ = std::make_unique<AlgebraContext>(in);
    mo_ = std::make_unique<MaximalOrderData>(assemble_maximal_order(*ctx_, select_field_data(*ctx_, pool)));
    iso_ = std::make_unique<IsoTester>(*ctx_, *mo_);
    isog_ = isog_label(in);
    orders_ = enumerate_overorders(*ctx_, *mo_, opt.max_index);
    const Order R = frobenius_order(*ctx_);
    pgens_ = icm::pic_generators(*ctx_, *mo_, *iso_, R);
    for (const auto& rec : orders_) pics_.push_back(pic_group(*ctx_, *iso_, rec.order, pgens_));
    WeakContext wc{*ctx_, *iso_, orders_, pics_, weak_};
    for (std::size_t s = 0; s < orders_.size(); ++s) weak_.push_back(weak_classes(wc, s));

    for (std::size_t s = 0; s < orders_.size(); ++s) {
        first_record_.push_back(records_.size());
        for (const auto& wcls : weak_[s])
            for (std::size_t j = 0; j < pics_[s].elements.size(); ++j) {
                ClassRecord r;
                r.isog = isog_;
                r.order = s;
                r.N = orders_[s].N;
                r.i = orders_[s].i;
                r.w = wcls.w;
                r.j = static_cast<long>(j + 1);
                r.rep = mul(*ctx_, wcls.rep, pics_[s].elements[j].rep);
                records_.push_back(std::move(r));
            }
    }
}

const ClassRecord& IsogenyClass::classify(const Lattice& I) const {
    const Order S = mult_ring(*ctx_, I);
    std::size_t s = orders_.size();
    for (std::size_t k = 0; k < orders_.size(); ++k)
        if (orders_[k].order == S) s = k;
    if (s == orders_.size())
        throw Error(ErrorKind::ValidationError, kModule, "the multiplicator ring is not an overorder of R");
    for (const auto& wcls : weak_[s]) {
        if (!weakly_equivalent(*ctx_, I, wcls.rep)) continue;
        const Lattice X = colon(*ctx_, I, wcls.rep);
        const std::size_t j = pic_discrete_log(*ctx_, *iso_, pics_[s], X);
        const ClassRecord& r =
            records_.at(first_record_[s] + static_cast<std::size_t>(wcls.w - 1) * pics_[s].elements.size() + j);
        ensure(iso_->isomorphism(I, r.rep).has_value(), kModule, "classified ideal is not isomorphic to its representative");
        return r;
    }
    throw Error(ErrorKind::InvariantBreach, kModule, "ideal lies in no weak class of its multiplicator ring");
}

}  // namespace icm
