#include "sanisim/ecc.hpp"

#include <algorithm>
#include <set>

namespace sanisim::ecc {

// ---------------------------------------------------------------------------
// Field

std::uint32_t Field::default_primitive_poly(int m) {
    switch (m) {
        case 3:  return 0x0B;     // x^3+x+1
        case 4:  return 0x13;     // x^4+x+1
        case 5:  return 0x25;     // x^5+x^2+1
        case 6:  return 0x43;     // x^6+x+1
        case 7:  return 0x89;     // x^7+x^3+1
        case 8:  return 0x11D;    // x^8+x^4+x^3+x^2+1
        case 9:  return 0x211;    // x^9+x^4+1
        case 10: return 0x409;    // x^10+x^3+1
        case 11: return 0x805;    // x^11+x^2+1
        case 12: return 0x1053;   // x^12+x^6+x^4+x+1
        case 13: return 0x201B;   // x^13+x^4+x^3+x+1
        case 14: return 0x4443;   // x^14+x^10+x^6+x+1
        case 15: return 0x8003;   // x^15+x+1
        case 16: return 0x1100B;  // x^16+x^12+x^3+x+1
        default:
            throw Error(ErrorKind::ConfigError, "no default primitive polynomial for m=" + std::to_string(m));
    }
}

Field::Field(int m, std::uint32_t primitive_poly) : m_(m), poly_(primitive_poly) {
    if (m < 3 || m > 16)
        throw Error(ErrorKind::ConfigError, "field degree m must be in [3,16], got " + std::to_string(m));
    const std::uint32_t size = 1u << m;
    if (primitive_poly < size || primitive_poly >= (size << 1))
        throw Error(ErrorKind::NotPrimitive, "polynomial is not of degree m");
    order_ = static_cast<int>(size) - 1;

    log_.assign(size, 0);
    antilog_.assign(2 * order_, 0);
    std::vector<bool> seen(size, false);

    std::uint32_t x = 1;
    for (int i = 0; i < order_; ++i) {
        if (x == 0 || seen[x]) {
            throw Error(ErrorKind::NotPrimitive,
                        "alpha has multiplicative order below 2^m-1");
        }
        seen[x] = true;
        antilog_[i] = static_cast<std::uint16_t>(x);
        antilog_[i + order_] = static_cast<std::uint16_t>(x);
        log_[x] = static_cast<std::uint16_t>(i);
        x <<= 1;
        if (x & size) x ^= primitive_poly;
    }
    if (x != 1) // alpha^(2^m-1) must wrap to 1
        throw Error(ErrorKind::NotPrimitive, "alpha^(2^m-1) != 1");
}

std::uint16_t Field::inv(std::uint16_t a) const {
    return antilog_[order_ - log_[a]];
}

std::uint16_t Field::alpha_pow(long long e) const {
    long long r = e % order_;
    if (r < 0) r += order_;
    return antilog_[r];
}

int Field::log_of(std::uint16_t a) const { return log_[a]; }

// ---------------------------------------------------------------------------
// Generator construction

namespace {

// Product of GF(2)[x] polynomials given as coefficient vectors (index = degree).
std::vector<std::uint8_t> poly_mul_gf2(const std::vector<std::uint8_t>& a,
                                       const std::vector<std::uint8_t>& b) {
    std::vector<std::uint8_t> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] ^= b[j];
    }
    return out;
}

// Minimal polynomial of alpha^e: product of (x - alpha^c) over the conjugacy
// class {e * 2^i mod (2^m - 1)}. Coefficients land in GF(2).
std::vector<std::uint8_t> minimal_poly(const Field& f, int e) {
    std::set<int> cls;
    int c = e % f.order();
    while (!cls.count(c)) {
        cls.insert(c);
        c = (c * 2) % f.order();
    }
    // poly over GF(2^m), index = degree
    std::vector<std::uint16_t> poly = {1};
    for (int exp : cls) {
        const std::uint16_t root = f.alpha_pow(exp);
        std::vector<std::uint16_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];              // x * poly
            next[i] ^= f.mul(poly[i], root);     // root * poly
        }
        poly = std::move(next);
    }
    std::vector<std::uint8_t> out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] > 1)
            throw Error(ErrorKind::NotPrimitive, "minimal polynomial has non-binary coefficient");
        out[i] = static_cast<std::uint8_t>(poly[i]);
    }
    return out;
}

} // namespace

Code::Code(const Field& field, int t, int shortened_by)
    : field_(field), t_(t), shortened_by_(shortened_by) {
    if (t < 1) throw Error(ErrorKind::ConfigError, "t must be >= 1");
    if (shortened_by < 0 || shortened_by >= field.order())
        throw Error(ErrorKind::ConfigError, "shortened_by out of range");
    n_ = field.order() - shortened_by;
    // The segment layout budgets m*t parity bits per code word; a code whose
    // parity budget reaches n cannot carry data.
    if (field.m() * t >= n_)
        throw Error(ErrorKind::CapacityExceeded,
                    "parity bits (m*t = " + std::to_string(field.m() * t) +
                        ") would exceed n = " + std::to_string(n_));

    // lcm over odd powers: conjugacy classes are disjoint or equal, so the
    // lcm is the product over distinct classes.
    std::set<int> covered;
    generator_ = {1};
    for (int e = 1; e <= 2 * t - 1; e += 2) {
        int canon = e % field.order();
        // canonical class member: smallest exponent in the class
        {
            int c = canon, best = canon;
            do {
                c = (c * 2) % field.order();
                best = std::min(best, c);
            } while (c != canon);
            canon = best;
        }
        if (covered.count(canon)) continue;
        covered.insert(canon);
        generator_ = poly_mul_gf2(generator_, minimal_poly(field, e));
    }

    const int parity = static_cast<int>(generator_.size()) - 1;
    k_ = n_ - parity;
    if (k_ < 1)
        throw Error(ErrorKind::CapacityExceeded, "generator degree leaves no data bits");

    if (parity <= 64) {
        generator_fits_u64_ = true;
        for (int i = 0; i <= parity; ++i)
            if (generator_[i]) generator_bits_ |= 1ULL << i;
    }
}

std::string Code::generator_hex() const {
    // MSB-first dump of the coefficients, degree n-k down to 0.
    BitVec bits(generator_.size());
    for (std::size_t i = 0; i < generator_.size(); ++i)
        bits[i] = generator_[generator_.size() - 1 - i];
    return bits_to_hex(bits);
}

BitVec Code::encode(const BitVec& data) const {
    if (static_cast<int>(data.size()) != k_)
        throw Error(ErrorKind::LengthMismatch,
                    "data length " + std::to_string(data.size()) + " != k " + std::to_string(k_));
    const int parity = n_ - k_;
    if (generator_fits_u64_) {
        // LFSR division; register holds the running remainder, bit i = coeff of x^i.
        const std::uint64_t g = generator_bits_ & ~(1ULL << parity);
        std::uint64_t reg = 0;
        const std::uint64_t top = 1ULL << (parity - 1);
        for (int i = 0; i < k_; ++i) {
            const bool fb = ((reg & top) != 0) ^ (data[i] != 0);
            reg = (reg << 1) & ((parity == 64) ? ~0ULL : ((1ULL << parity) - 1));
            if (fb) reg ^= g;
        }
        BitVec out(parity);
        for (int i = 0; i < parity; ++i)
            out[i] = (reg >> (parity - 1 - i)) & 1;
        return out;
    }
    // generic remainder of x^parity * data(x) mod generator
    std::vector<std::uint8_t> rem(parity, 0); // index = degree
    for (int i = 0; i < k_; ++i) {
        const std::uint8_t fb = rem[parity - 1] ^ data[i];
        for (int d = parity - 1; d > 0; --d) rem[d] = rem[d - 1];
        rem[0] = 0;
        if (fb)
            for (int d = 0; d < parity; ++d) rem[d] ^= generator_[d];
    }
    BitVec out(parity);
    for (int i = 0; i < parity; ++i) out[i] = rem[parity - 1 - i];
    return out;
}

std::vector<std::uint16_t> Code::compute_syndromes(const BitVec& received) const {
    if (static_cast<int>(received.size()) != n_)
        throw Error(ErrorKind::LengthMismatch,
                    "received length " + std::to_string(received.size()) + " != n " + std::to_string(n_));
    std::vector<std::uint16_t> s(2 * t_, 0);
    for (int i = 1; i <= 2 * t_; ++i) {
        // Horner over string order (first bit = highest degree).
        const std::uint16_t a = field_.alpha_pow(i);
        std::uint16_t acc = 0;
        for (int j = 0; j < n_; ++j) {
            acc = field_.mul(acc, a);
            if (received[j]) acc ^= 1;
        }
        s[i - 1] = acc;
    }
    return s;
}

std::vector<std::uint16_t> Code::berlekamp_massey(const std::vector<std::uint16_t>& syndromes) const {
    std::vector<std::uint16_t> sigma = {1};
    std::vector<std::uint16_t> prev = {1}; // B(x)
    int L = 0, shift = 1;
    std::uint16_t b = 1;

    for (std::size_t idx = 0; idx < syndromes.size(); ++idx) {
        // discrepancy d = S[idx] + sum sigma[i] * S[idx-i]
        std::uint16_t d = syndromes[idx];
        for (int i = 1; i <= L && i < static_cast<int>(sigma.size()); ++i)
            if (idx >= static_cast<std::size_t>(i))
                d ^= field_.mul(sigma[i], syndromes[idx - i]);

        if (d == 0) {
            ++shift;
            continue;
        }
        // sigma' = sigma - (d/b) x^shift B
        std::vector<std::uint16_t> next = sigma;
        const std::uint16_t scale = field_.mul(d, field_.inv(b));
        if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i + shift] ^= field_.mul(scale, prev[i]);

        if (2 * L <= static_cast<int>(idx)) {
            prev = sigma;
            b = d;
            L = static_cast<int>(idx) + 1 - L;
            shift = 1;
        } else {
            ++shift;
        }
        sigma = std::move(next);
    }

    while (sigma.size() > 1 && sigma.back() == 0) sigma.pop_back();
    return sigma;
}

std::vector<int> Code::chien_search(const std::vector<std::uint16_t>& sigma) const {
    std::vector<int> roots;
    const int deg = static_cast<int>(sigma.size()) - 1;
    if (deg <= 0) return roots;

    // Evaluate sigma(alpha^-j) for j = 0..n-1; gamma_l picks up a factor
    // alpha^-l per step.
    std::vector<std::uint16_t> gamma(sigma);
    std::vector<std::uint16_t> step(sigma.size());
    for (std::size_t l = 0; l < sigma.size(); ++l)
        step[l] = field_.alpha_pow(-static_cast<long long>(l));
    for (int j = 0; j < n_; ++j) {
        std::uint16_t val = 0;
        for (std::size_t l = 0; l < gamma.size(); ++l) val ^= gamma[l];
        if (val == 0) roots.push_back(j);
        for (std::size_t l = 1; l < gamma.size(); ++l)
            gamma[l] = field_.mul(gamma[l], step[l]);
    }
    return roots;
}

DecodeOutcome Code::decode(const BitVec& received) const {
    const auto syndromes = compute_syndromes(received);

    DecodeOutcome out;
    const bool clean = std::all_of(syndromes.begin(), syndromes.end(),
                                   [](std::uint16_t s) { return s == 0; });
    if (clean) {
        out.status = DecodeOutcome::Status::Corrected;
        out.data.assign(received.begin(), received.begin() + k_);
        return out;
    }

    const auto sigma = berlekamp_massey(syndromes);
    const int deg = static_cast<int>(sigma.size()) - 1;
    if (deg < 1 || deg > t_) return out; // Uncorrectable

    const auto roots = chien_search(sigma);
    if (static_cast<int>(roots.size()) != deg) return out;

    BitVec fixed = received;
    for (int degree : roots) fixed[n_ - 1 - degree] ^= 1;

    // Guard: the corrected word must be a codeword.
    const auto check = compute_syndromes(fixed);
    if (!std::all_of(check.begin(), check.end(), [](std::uint16_t s) { return s == 0; }))
        return out;

    out.status = DecodeOutcome::Status::Corrected;
    out.error_count = deg;
    out.error_positions = roots;
    out.data.assign(fixed.begin(), fixed.begin() + k_);
    return out;
}

MaskResult Code::craft_uncorrectable_mask(const BitVec& data_read, const BitVec& parity_read,
                                          int clear_budget, const BitVec* programmable) const {
    const int parity = n_ - k_;
    if (static_cast<int>(parity_read.size()) != parity)
        throw Error(ErrorKind::LengthMismatch, "parity_read length != n-k");
    if (static_cast<int>(data_read.size()) != k_)
        throw Error(ErrorKind::LengthMismatch, "data_read length != k");
    if (programmable && static_cast<int>(programmable->size()) != parity)
        throw Error(ErrorKind::LengthMismatch, "programmable filter length != n-k");

    std::vector<int> candidates;
    for (int i = 0; i < parity; ++i)
        if (parity_read[i] && (!programmable || (*programmable)[i])) candidates.push_back(i);

    const int initial = t_ + 1;
    if (static_cast<int>(candidates.size()) < initial || clear_budget < initial)
        throw Error(ErrorKind::MaskInfeasible,
                    "need " + std::to_string(initial) + " programmable one-bits, have " +
                        std::to_string(std::min<std::size_t>(candidates.size(), clear_budget)));

    MaskResult result;
    result.clear_mask = all_zeros(parity);
    BitVec word(data_read);
    word.insert(word.end(), parity_read.begin(), parity_read.end());

    int used = 0;
    auto clear_one = [&](int idx) {
        result.clear_mask[idx] = 1;
        word[k_ + idx] = 0;
        ++used;
    };
    for (int i = 0; i < initial; ++i) clear_one(candidates[i]);

    while (decode(word).corrected()) {
        if (used >= clear_budget || used >= static_cast<int>(candidates.size()))
            throw Error(ErrorKind::MaskInfeasible,
                        "word still decodes after clearing " + std::to_string(used) + " bits");
        clear_one(candidates[used]);
    }

    result.bits_cleared = used;
    result.verified_uncorrectable = true;
    return result;
}

// ---------------------------------------------------------------------------
// Page segmentation

void SegmentLayout::validate() const {
    if (segments_per_page < 1 || data_bits_per_segment < 1 || parity_bits_per_segment < 1)
        throw Error(ErrorKind::ConfigError, "segment layout counts must be >= 1");
    if (segments_per_page * data_bits_per_segment != main_bits)
        throw Error(ErrorKind::ConfigError, "segments * data bits must equal main area size");
    if (parity_region_bits() > spare_bits)
        throw Error(ErrorKind::ConfigError, "parity region exceeds spare area");
}

Codec Codec::make_page_codec(int m, int t, int segments, int main_bits, int spare_bits) {
    if (segments < 1 || main_bits % segments != 0)
        throw Error(ErrorKind::ConfigError, "main area must split into equal segments");
    const int data_bits = main_bits / segments;

    Field field(m, Field::default_primitive_poly(m));
    const int full = field.order();
    // Shorten so the transmitted word is exactly data + parity bits.
    const int parity_budget = m * t;
    const int shortened = full - (data_bits + parity_budget);
    if (shortened < 0)
        throw Error(ErrorKind::ConfigError, "segment does not fit the field; increase m");
    Code code(field, t, shortened);
    if (code.k() != data_bits) {
        // Generator degree below m*t (shared conjugacy classes); re-shorten to match.
        const int adjust = code.k() - data_bits;
        code = Code(field, t, shortened + adjust);
    }

    SegmentLayout layout;
    layout.segments_per_page = segments;
    layout.data_bits_per_segment = data_bits;
    layout.parity_bits_per_segment = code.parity_bits();
    layout.main_bits = main_bits;
    layout.spare_bits = spare_bits;
    layout.validate();
    if (code.k() != data_bits)
        throw Error(ErrorKind::ConfigError, "code data length does not match segment size");
    return Codec{std::move(code), layout};
}

BitVec Codec::segment_received(const BitVec& page, int seg) const {
    BitVec word;
    word.reserve(code.n());
    const int d0 = layout.data_offset(seg);
    const int p0 = layout.parity_offset(seg);
    word.insert(word.end(), page.begin() + d0, page.begin() + d0 + layout.data_bits_per_segment);
    word.insert(word.end(), page.begin() + p0, page.begin() + p0 + layout.parity_bits_per_segment);
    return word;
}

BitVec Codec::encode_page(const BitVec& main_data) const {
    if (static_cast<int>(main_data.size()) != layout.main_bits)
        throw Error(ErrorKind::LengthMismatch, "main data length != main area size");
    BitVec page(main_data);
    page.resize(layout.main_bits + layout.spare_bits, 1); // unused spare stays erased
    for (int seg = 0; seg < layout.segments_per_page; ++seg) {
        BitVec data(main_data.begin() + layout.data_offset(seg),
                    main_data.begin() + layout.data_offset(seg) + layout.data_bits_per_segment);
        const BitVec parity = code.encode(data);
        std::copy(parity.begin(), parity.end(), page.begin() + layout.parity_offset(seg));
    }
    return page;
}

} // namespace sanisim::ecc
