#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>

#include "tailgate/error.hpp"

namespace tailgate {

inline constexpr std::size_t kMaxDim = 8;

enum class NormKind { L1, L2, LInf };

std::string_view to_string(NormKind k) noexcept;
NormKind parse_norm(std::string_view text);

// A point of R^d, d <= kMaxDim, stored inline so that samplers can return
// vectors by value without allocating. Coordinates are always finite and
// negative zero is canonicalised to +0 so that value equality coincides with
// bitwise equality.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim);
    Vector(std::initializer_list<double> coords);
    explicit Vector(std::span<const double> coords);

    static Vector zero(std::size_t dim) { return Vector(dim); }

    std::size_t dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    void set(std::size_t i, double value);

    std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

    Vector& operator+=(const Vector& rhs);
    Vector& operator-=(const Vector& rhs);
    Vector& operator*=(double s);

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(double s, Vector a) { return a *= s; }
    friend Vector operator-(Vector a) { return a *= -1.0; }

    friend bool operator==(const Vector& a, const Vector& b) noexcept;
    // Lexicographic order on (dim, coords); the canonical atom order.
    friend bool operator<(const Vector& a, const Vector& b) noexcept;

private:
    void check_finite() const;

    std::array<double, kMaxDim> c_{};
    std::size_t dim_ = 0;
};

double norm(const Vector& v, NormKind k);

void require_same_dim(const Vector& a, const Vector& b);

}  // namespace tailgate
