#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace mpst {

/// Value-or-error holder. `E` must differ from `T`.
template <typename T, typename E>
class Result {
public:
    Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}  // NOLINT(google-explicit-constructor)
    Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}  // NOLINT(google-explicit-constructor)

    bool ok() const noexcept { return v_.index() == 0; }
    explicit operator bool() const noexcept { return ok(); }

    const T& value() const& {
        if (!ok()) throw std::logic_error("Result::value on error");
        return std::get<0>(v_);
    }
    T&& value() && {
        if (!ok()) throw std::logic_error("Result::value on error");
        return std::get<0>(std::move(v_));
    }
    const E& error() const& {
        if (ok()) throw std::logic_error("Result::error on value");
        return std::get<1>(v_);
    }

    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> v_;
};

}  // namespace mpst
