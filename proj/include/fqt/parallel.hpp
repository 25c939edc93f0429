#pragma once

#include <cstddef>
#include <functional>

namespace fqt {

// body(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown here
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body);

}  // namespace fqt
