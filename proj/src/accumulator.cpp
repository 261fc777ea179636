#include "socfield/accumulator.hpp"

namespace socfield {

bool valid_chunk_width(int k) {
    return k == 2 || k == 4 || k == 8 || k == 16;
}

std::size_t chunk_count(std::size_t n, int k) {
    if (!valid_chunk_width(k)) throw ConfigError("chunk_k", "must be 2, 4, 8, or 16");
    return (n + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
}

} // namespace socfield
