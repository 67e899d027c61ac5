#pragma once

#include <span>
#include <vector>

namespace testutil {

template <typename T>
std::vector<T> as_vector(std::span<const T> s) {
    return {s.begin(), s.end()};
}

}  // namespace testutil
