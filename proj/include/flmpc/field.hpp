#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flmpc/errors.hpp"

namespace flmpc {

/// Trial-division primality check, adequate for desk-scale moduli.
inline bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

/// Fixed-dimension vector over Z_q. Components are stored reduced into
/// [0, q); arithmetic is closed over the same (q, dimension) and mixing
/// moduli or dimensions throws DomainError.
class FieldVector {
public:
    FieldVector() : q_(0) {}
    FieldVector(std::uint32_t q, std::size_t dim) : q_(q), comps_(dim, 0) {}
    FieldVector(std::uint32_t q, std::vector<std::uint32_t> comps)
        : q_(q), comps_(std::move(comps)) {
        for (auto& c : comps_) c %= q_;
    }
    FieldVector(std::uint32_t q, std::initializer_list<std::uint32_t> comps)
        : FieldVector(q, std::vector<std::uint32_t>(comps)) {}

    std::uint32_t modulus() const { return q_; }
    std::size_t dim() const { return comps_.size(); }
    std::uint32_t operator[](std::size_t i) const { return comps_[i]; }
    const std::vector<std::uint32_t>& components() const { return comps_; }

    void set(std::size_t i, std::uint32_t v) { comps_[i] = v % q_; }

    friend FieldVector operator+(const FieldVector& a, const FieldVector& b) {
        a.check_compatible(b);
        FieldVector r(a.q_, a.dim());
        for (std::size_t i = 0; i < a.dim(); ++i)
            r.comps_[i] = (std::uint32_t)(((std::uint64_t)a.comps_[i] + b.comps_[i]) % a.q_);
        return r;
    }
    friend FieldVector operator-(const FieldVector& a, const FieldVector& b) {
        a.check_compatible(b);
        FieldVector r(a.q_, a.dim());
        for (std::size_t i = 0; i < a.dim(); ++i)
            r.comps_[i] = (std::uint32_t)(((std::uint64_t)a.comps_[i] + a.q_ - b.comps_[i]) % a.q_);
        return r;
    }
    FieldVector operator-() const {
        FieldVector r(q_, dim());
        for (std::size_t i = 0; i < dim(); ++i)
            r.comps_[i] = comps_[i] == 0 ? 0 : q_ - comps_[i];
        return r;
    }
    FieldVector& operator+=(const FieldVector& o) { return *this = *this + o; }
    FieldVector& operator-=(const FieldVector& o) { return *this = *this - o; }

    friend bool operator==(const FieldVector& a, const FieldVector& b) {
        return a.q_ == b.q_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const FieldVector& a, const FieldVector& b) { return !(a == b); }
    friend bool operator<(const FieldVector& a, const FieldVector& b) {
        if (a.q_ != b.q_) return a.q_ < b.q_;
        return a.comps_ < b.comps_;
    }

    /// Centered representative of component i, in [-(q-1)/2, (q-1)/2].
    std::int64_t decode(std::size_t i) const {
        std::int64_t half = (q_ - 1) / 2;
        std::int64_t v = comps_[i];
        return v <= half ? v : v - (std::int64_t)q_;
    }

    std::vector<std::int64_t> decode_all() const {
        std::vector<std::int64_t> out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = decode(i);
        return out;
    }

    /// Reduces a signed integer into [0, q) at component i.
    void encode(std::size_t i, std::int64_t v) {
        std::int64_t m = v % (std::int64_t)q_;
        if (m < 0) m += q_;
        comps_[i] = (std::uint32_t)m;
    }

    static FieldVector encode_vector(std::uint32_t q, const std::vector<std::int64_t>& vals) {
        FieldVector r(q, vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) r.encode(i, vals[i]);
        return r;
    }

private:
    void check_compatible(const FieldVector& o) const {
        if (q_ != o.q_)
            throw DomainError("field vectors with mixed moduli: " + std::to_string(q_) +
                              " vs " + std::to_string(o.q_));
        if (dim() != o.dim())
            throw DomainError("field vectors with mixed dimensions: " + std::to_string(dim()) +
                              " vs " + std::to_string(o.dim()));
    }

    std::uint32_t q_;
    std::vector<std::uint32_t> comps_;
};

} // namespace flmpc
