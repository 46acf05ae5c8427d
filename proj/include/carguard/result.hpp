#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace carguard {

/// Error value carried by a failed Result: a typed code plus human-readable context.
template <typename Code>
struct Error {
    Code code;
    std::string message;
};

/// Minimal value-or-error holder (the project targets C++20, which lacks std::expected).
template <typename T, typename Code>
class Result {
public:
    using value_type = T;
    using error_type = Error<Code>;

    Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Result(error_type error) : storage_(std::in_place_index<1>, std::move(error)) {}

    [[nodiscard]] bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    T& value() & {
        assert(has_value());
        return std::get<0>(storage_);
    }
    const T& value() const& {
        assert(has_value());
        return std::get<0>(storage_);
    }
    T&& value() && {
        assert(has_value());
        return std::get<0>(std::move(storage_));
    }

    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }
    T& operator*() & { return value(); }
    const T& operator*() const& { return value(); }

    const error_type& error() const {
        assert(!has_value());
        return std::get<1>(storage_);
    }

private:
    std::variant<T, error_type> storage_;
};

template <typename Code>
Error<Code> make_error(Code code, std::string message = {}) {
    return Error<Code>{code, std::move(message)};
}

}  // namespace carguard
