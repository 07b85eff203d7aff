#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "qsearch/common.hpp"

namespace qsearch {

/// Hypercubic lattice L^d with periodic wrap and row-major, axis-0-fastest
/// vertex indexing.
struct Lattice {
    int d = 0;
    std::size_t L = 0;
    std::size_t n = 0;                 // L^d
    std::vector<std::size_t> strides;  // strides[j] = L^j

    std::size_t coord(std::size_t index, int axis) const {
        return (index / strides[static_cast<std::size_t>(axis)]) % L;
    }

    std::vector<std::size_t> coords(std::size_t index) const {
        std::vector<std::size_t> c(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] = coord(index, j);
        return c;
    }

    std::size_t index_of(const std::vector<std::size_t>& c) const {
        std::size_t i = 0;
        for (int j = 0; j < d; ++j) i += c[static_cast<std::size_t>(j)] * strides[static_cast<std::size_t>(j)];
        return i;
    }

    /// Neighbor along an axis, step = +1 or -1, wrapped.
    std::size_t neighbor(std::size_t index, int axis, int step) const {
        const std::size_t s = strides[static_cast<std::size_t>(axis)];
        const std::size_t x = coord(index, axis);
        if (step > 0) return x + 1 == L ? index - (L - 1) * s : index + s;
        return x == 0 ? index + (L - 1) * s : index - s;
    }
};

inline Lattice make_lattice(int d, std::size_t side) {
    if (d < 1 || d > 20) throw std::invalid_argument("make_lattice: need 1 <= d <= 20");
    if (side < 2 || side % 2 != 0)
        throw std::invalid_argument("make_lattice: side length must be even and >= 2");

    Lattice lat;
    lat.d = d;
    lat.L = side;
    lat.strides.resize(static_cast<std::size_t>(d));
    std::size_t n = 1;
    for (int j = 0; j < d; ++j) {
        lat.strides[static_cast<std::size_t>(j)] = n;
        if (n > std::numeric_limits<std::size_t>::max() / side)
            throw size_error("make_lattice: L^d overflows");
        n *= side;
    }
    if (n > (std::size_t{1} << 32)) throw size_error("make_lattice: L^d exceeds addressable size");
    lat.n = n;
    return lat;
}

inline std::vector<std::size_t> index_coords(const Lattice& lat, std::size_t index) {
    if (index >= lat.n) throw std::out_of_range("index_coords: index out of range");
    return lat.coords(index);
}

inline std::size_t coords_index(const Lattice& lat, const std::vector<std::size_t>& c) {
    if (c.size() != static_cast<std::size_t>(lat.d))
        throw std::invalid_argument("coords_index: wrong coordinate count");
    for (std::size_t x : c)
        if (x >= lat.L) throw std::out_of_range("coords_index: coordinate out of range");
    return lat.index_of(c);
}

enum class Parity { odd, even };

/// One half of the bipartite link partition: N/2^d disjoint elementary
/// hypercubes covering every vertex once. Odd blocks anchor at all-even
/// coordinates, even blocks at all-odd (the odd anchors shifted by
/// (1,...,1), wrapped). Within a block, corner c in {0,1}^d sits at
/// anchor + c in binary corner order.
struct BlockPartition {
    Parity parity = Parity::odd;
    int d = 0;
    std::size_t block_size = 0; // 2^d
    std::size_t n_blocks = 0;   // N / 2^d
    std::vector<std::uint32_t> corners; // flat, block-major, binary corner order

    const std::uint32_t* block(std::size_t b) const { return corners.data() + b * block_size; }
};

inline BlockPartition block_partition(const Lattice& lat, Parity parity) {
    BlockPartition part;
    part.parity = parity;
    part.d = lat.d;
    part.block_size = std::size_t{1} << lat.d;
    part.n_blocks = lat.n / part.block_size;
    part.corners.resize(lat.n);

    const std::size_t d = static_cast<std::size_t>(lat.d);
    const std::size_t base_coord = parity == Parity::odd ? 0 : 1;

    // Per-axis index step for corner bit j; wraps only for even-parity
    // anchors sitting at coordinate L-1.
    std::vector<std::int64_t> step(d);
    std::vector<std::size_t> anchor(d, base_coord);

    std::size_t out = 0;
    for (std::size_t b = 0; b < part.n_blocks; ++b) {
        std::size_t anchor_index = 0;
        for (std::size_t j = 0; j < d; ++j) {
            anchor_index += anchor[j] * lat.strides[j];
            const auto s = static_cast<std::int64_t>(lat.strides[j]);
            step[j] = anchor[j] + 1 == lat.L ? s * (1 - static_cast<std::int64_t>(lat.L)) : s;
        }
        std::uint32_t* blk = part.corners.data() + out;
        blk[0] = static_cast<std::uint32_t>(anchor_index);
        for (std::size_t c = 1; c < part.block_size; ++c) {
            const std::size_t low = static_cast<std::size_t>(std::countr_zero(c));
            blk[c] = static_cast<std::uint32_t>(static_cast<std::int64_t>(blk[c & (c - 1)]) + step[low]);
        }
        out += part.block_size;

        // Advance the anchor odometer over {base, base+2, ...}^d.
        for (std::size_t j = 0; j < d; ++j) {
            anchor[j] += 2;
            if (anchor[j] < lat.L) break;
            anchor[j] = base_coord;
        }
    }
    return part;
}

} // namespace qsearch
