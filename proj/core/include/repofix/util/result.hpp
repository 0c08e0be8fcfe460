#pragma once
// Minimal value-or-diagnostic carrier for operations whose failure feeds the
// retry machinery rather than unwinding the stack.

#include <optional>
#include <string>
#include <utility>

namespace repofix {

template <typename T>
struct Result {
    std::optional<T> value;
    std::string error;

    bool ok() const { return value.has_value(); }
    T& operator*() { return *value; }
    const T& operator*() const { return *value; }
    T* operator->() { return &*value; }
    const T* operator->() const { return &*value; }

    static Result success(T v) { return Result{std::move(v), {}}; }
    static Result failure(std::string message) { return Result{std::nullopt, std::move(message)}; }
};

}  // namespace repofix
