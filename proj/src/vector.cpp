#include "tailgate/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tailgate {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidVector: return "INVALID_VECTOR";
        case ErrorCode::DimMismatch: return "DIM_MISMATCH";
        case ErrorCode::EvalFailure: return "EVAL_FAILURE";
        case ErrorCode::SupportOverflow: return "SUPPORT_OVERFLOW";
        case ErrorCode::BoundViolation: return "BOUND_VIOLATION";
        case ErrorCode::ZeroMean: return "ZERO_MEAN";
        case ErrorCode::Infeasible: return "INFEASIBLE";
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
        case ErrorCode::Mismatch: return "MISMATCH";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

std::string_view to_string(NormKind k) noexcept {
    switch (k) {
        case NormKind::L1: return "L1";
        case NormKind::L2: return "L2";
        case NormKind::LInf: return "LINF";
    }
    return "?";
}

NormKind parse_norm(std::string_view text) {
    if (text == "L1" || text == "l1") return NormKind::L1;
    if (text == "L2" || text == "l2") return NormKind::L2;
    if (text == "LINF" || text == "linf" || text == "Linf") return NormKind::LInf;
    throw Error(ErrorCode::InvalidArgument, "unknown norm '" + std::string(text) + "'");
}

namespace {

inline double canonical(double x) noexcept { return x + 0.0; }

}  // namespace

Vector::Vector(std::size_t dim) : dim_(dim) {
    if (dim > kMaxDim)
        throw Error(ErrorCode::InvalidVector,
                    "dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxDim));
}

Vector::Vector(std::initializer_list<double> coords)
    : Vector(std::span<const double>(coords.begin(), coords.size())) {}

Vector::Vector(std::span<const double> coords) : Vector(coords.size()) {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] = canonical(coords[i]);
    check_finite();
}

void Vector::set(std::size_t i, double value) {
    if (i >= dim_) throw Error(ErrorCode::InvalidVector, "coordinate index out of range");
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidVector, "non-finite coordinate");
    c_[i] = canonical(value);
}

void Vector::check_finite() const {
    for (std::size_t i = 0; i < dim_; ++i)
        if (!std::isfinite(c_[i])) throw Error(ErrorCode::InvalidVector, "non-finite coordinate");
}

Vector& Vector::operator+=(const Vector& rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t i = 0; i < dim_; ++i) c_[i] = canonical(c_[i] + rhs.c_[i]);
    check_finite();
    return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t i = 0; i < dim_; ++i) c_[i] = canonical(c_[i] - rhs.c_[i]);
    check_finite();
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] = canonical(c_[i] * s);
    check_finite();
    return *this;
}

bool operator==(const Vector& a, const Vector& b) noexcept {
    return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
}

bool operator<(const Vector& a, const Vector& b) noexcept {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    return std::lexicographical_compare(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin(),
                                        b.c_.begin() + b.dim_);
}

double norm(const Vector& v, NormKind k) {
    if (v.dim() == 0) throw Error(ErrorCode::InvalidVector, "norm of a zero-dimensional vector");
    double acc = 0.0;
    switch (k) {
        case NormKind::L1:
            for (double x : v.coords()) acc += std::abs(x);
            return acc;
        case NormKind::L2:
            if (v.dim() == 1) return std::abs(v[0]);
            for (double x : v.coords()) acc += x * x;
            return std::sqrt(acc);
        case NormKind::LInf:
            for (double x : v.coords()) acc = std::max(acc, std::abs(x));
            return acc;
    }
    return acc;
}

void require_same_dim(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim())
        throw Error(ErrorCode::DimMismatch, "dimensions " + std::to_string(a.dim()) + " and " +
                                                std::to_string(b.dim()) + " differ");
}

}  // namespace tailgate
