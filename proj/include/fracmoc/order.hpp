#pragma once

#include <string>

#include "fracmoc/errors.hpp"

namespace fracmoc {

// A fractional order in (0, 1].
class Order {
public:
    constexpr explicit Order(double value) : value_(value) {
        if (!(value > 0.0 && value <= 1.0))
            throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(value));
    }

    constexpr double value() const noexcept { return value_; }
    constexpr bool is_classical() const noexcept { return value_ == 1.0; }

    friend constexpr bool operator==(Order, Order) = default;

private:
    double value_;
};

}  // namespace fracmoc
