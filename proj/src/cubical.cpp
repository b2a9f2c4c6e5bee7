#include "mlcd/cubical.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace mlcd {

namespace {

// Interval-code representation: axis value 2c+1 is the full interval
// [c, c+1], axis value 2c is the degenerate interval {c}. A cube's dimension
// is its number of odd codes, and its facets differ by one unit along one
// odd axis.

using Code = std::uint64_t;

struct CodeLattice {
    int dim = 0;
    std::vector<int> extent;        // top cells per axis
    std::vector<Code> stride;       // mixed-radix strides over 2*extent+1 values
    std::vector<char> top_present;  // dense top-cell membership

    Code lattice_size = 1;

    bool has_top(const std::vector<int>& coord) const {
        std::size_t key = 0;
        std::size_t s = 1;
        for (int i = dim - 1; i >= 0; --i) {
            key += static_cast<std::size_t>(coord[static_cast<std::size_t>(i)]) * s;
            s *= static_cast<std::size_t>(extent[static_cast<std::size_t>(i)]);
        }
        return top_present[key] != 0;
    }
};

constexpr std::size_t kFaceBudget = 10'000'000;

CodeLattice build_lattice(const CubicalComplex& cx) {
    CodeLattice lat;
    lat.dim = cx.dim;
    const auto d = static_cast<std::size_t>(cx.dim);

    std::vector<int> lo(d, std::numeric_limits<int>::max());
    std::vector<int> hi(d, std::numeric_limits<int>::min());
    for (const auto& cell : cx.top_cells)
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], cell[i]);
            hi[i] = std::max(hi[i], cell[i]);
        }

    lat.extent.resize(d);
    std::size_t top_volume = 1;
    for (std::size_t i = 0; i < d; ++i) {
        lat.extent[i] = hi[i] - lo[i] + 1;
        lat.lattice_size *= static_cast<Code>(2 * lat.extent[i] + 1);
        top_volume *= static_cast<std::size_t>(lat.extent[i]);
        if (lat.lattice_size > 2 * kFaceBudget)
            throw std::runtime_error("betti: face budget exceeded (complex spans too many cells)");
    }

    lat.stride.resize(d);
    Code s = 1;
    for (int i = cx.dim - 1; i >= 0; --i) {
        lat.stride[static_cast<std::size_t>(i)] = s;
        s *= static_cast<Code>(2 * lat.extent[static_cast<std::size_t>(i)] + 1);
    }

    lat.top_present.assign(top_volume, 0);
    for (const auto& cell : cx.top_cells) {
        std::size_t key = 0;
        std::size_t stride = 1;
        for (int i = cx.dim - 1; i >= 0; --i) {
            key += static_cast<std::size_t>(cell[static_cast<std::size_t>(i)] -
                                            lo[static_cast<std::size_t>(i)]) *
                   stride;
            stride *= static_cast<std::size_t>(lat.extent[static_cast<std::size_t>(i)]);
        }
        lat.top_present[key] = 1;
    }
    return lat;
}

// Is the cube with the given codes a face of some present top cell? Each
// even axis leaves two candidate top coordinates, each odd axis one.
bool face_present(const CodeLattice& lat, const std::vector<int>& codes) {
    thread_local std::vector<int> coord, even_axes;
    coord.assign(static_cast<std::size_t>(lat.dim), 0);
    even_axes.clear();
    for (int i = 0; i < lat.dim; ++i) {
        const int c = codes[static_cast<std::size_t>(i)];
        if (c & 1)
            coord[static_cast<std::size_t>(i)] = c / 2;
        else
            even_axes.push_back(i);
    }
    const unsigned combos = 1u << even_axes.size();
    for (unsigned mask = 0; mask < combos; ++mask) {
        bool in_range = true;
        for (std::size_t b = 0; b < even_axes.size(); ++b) {
            const int axis = even_axes[b];
            const int cand = codes[static_cast<std::size_t>(axis)] / 2 - 1 +
                             static_cast<int>((mask >> b) & 1u);
            if (cand < 0 || cand >= lat.extent[static_cast<std::size_t>(axis)]) {
                in_range = false;
                break;
            }
            coord[static_cast<std::size_t>(axis)] = cand;
        }
        if (in_range && lat.has_top(coord)) return true;
    }
    return false;
}

using Column = std::vector<std::uint32_t>;

// XOR-merge of sorted index vectors.
void symmetric_difference(Column& into, const Column& other, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(into.begin(), into.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    into.swap(scratch);
}

}  // namespace

CubicalComplex to_cubical(const RegionAssignment& assignment, int tag) {
    CubicalComplex cx;
    cx.dim = assignment.cells.empty() ? static_cast<int>(assignment.cuts.size())
                                      : static_cast<int>(assignment.cells.front().size());
    for (std::size_t c = 0; c < assignment.cells.size(); ++c)
        if (assignment.tags[c] == tag) cx.top_cells.push_back(assignment.cells[c]);
    return cx;
}

BettiVector betti(const CubicalComplex& cx) {
    if (cx.empty()) throw std::invalid_argument("betti: empty complex");
    const int d = cx.dim;
    const CodeLattice lat = build_lattice(cx);

    // Enumerate all faces, bucketed by dimension, in lexicographic code
    // order (so packed keys are strictly increasing per bucket).
    std::vector<std::vector<Code>> faces(static_cast<std::size_t>(d) + 1);
    std::vector<int> codes(static_cast<std::size_t>(d), 0);
    std::size_t total_faces = 0;
    for (;;) {
        if (face_present(lat, codes)) {
            int k = 0;
            Code key = 0;
            for (int i = 0; i < d; ++i) {
                k += codes[static_cast<std::size_t>(i)] & 1;
                key += static_cast<Code>(codes[static_cast<std::size_t>(i)]) *
                       lat.stride[static_cast<std::size_t>(i)];
            }
            faces[static_cast<std::size_t>(k)].push_back(key);
            if (++total_faces > kFaceBudget)
                throw std::runtime_error("betti: face budget exceeded (more than 10^7 faces)");
        }
        int axis = d - 1;
        while (axis >= 0 &&
               ++codes[static_cast<std::size_t>(axis)] ==
                   2 * lat.extent[static_cast<std::size_t>(axis)] + 1) {
            codes[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }

    // Reduce boundary matrices top-down; rows that served as pivots in
    // dimension k+1 are guaranteed zero-reducible columns in dimension k and
    // are skipped (clearing).
    std::vector<long> rank(static_cast<std::size_t>(d) + 2, 0);
    std::vector<char> cleared;  // over faces[k-1] indices, for the next round
    std::vector<char> cleared_next;

    for (int k = d; k >= 1; --k) {
        const auto& cols = faces[static_cast<std::size_t>(k)];
        const auto& rows = faces[static_cast<std::size_t>(k) - 1];
        cleared_next.assign(rows.size(), 0);
        if (cols.empty()) {
            cleared = cleared_next;
            continue;
        }

        std::vector<Column> reduced;                 // stored pivot columns
        std::vector<std::uint32_t> pivot_owner(rows.size(),
                                               std::numeric_limits<std::uint32_t>::max());
        Column column, scratch;
        std::vector<int> face_codes(static_cast<std::size_t>(d));

        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (k < d && cleared[c]) continue;  // known cycle via clearing

            Code rem = cols[c];
            for (int i = 0; i < d; ++i) {
                face_codes[static_cast<std::size_t>(i)] =
                    static_cast<int>(rem / lat.stride[static_cast<std::size_t>(i)]);
                rem %= lat.stride[static_cast<std::size_t>(i)];
            }
            column.clear();
            for (int i = 0; i < d; ++i) {
                if (!(face_codes[static_cast<std::size_t>(i)] & 1)) continue;
                const Code low_key = cols[c] - lat.stride[static_cast<std::size_t>(i)];
                const Code high_key = cols[c] + lat.stride[static_cast<std::size_t>(i)];
                for (const Code key : {low_key, high_key}) {
                    const auto it = std::lower_bound(rows.begin(), rows.end(), key);
                    column.push_back(static_cast<std::uint32_t>(it - rows.begin()));
                }
            }
            std::sort(column.begin(), column.end());

            while (!column.empty()) {
                const std::uint32_t low = column.back();
                const std::uint32_t owner = pivot_owner[low];
                if (owner == std::numeric_limits<std::uint32_t>::max()) break;
                symmetric_difference(column, reduced[owner], scratch);
            }
            if (!column.empty()) {
                const std::uint32_t low = column.back();
                pivot_owner[low] = static_cast<std::uint32_t>(reduced.size());
                cleared_next[low] = 1;
                reduced.push_back(column);
                ++rank[static_cast<std::size_t>(k)];
            }
        }
        cleared = cleared_next;
    }

    BettiVector out;
    out.betti.resize(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k)
        out.betti[static_cast<std::size_t>(k)] =
            static_cast<long>(faces[static_cast<std::size_t>(k)].size()) -
            rank[static_cast<std::size_t>(k)] - rank[static_cast<std::size_t>(k) + 1];
    return out;
}

}  // namespace mlcd
