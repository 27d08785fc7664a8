#pragma once

/// Truncated frequency lattice: the integer cube |n_i| <= N in lexicographic
/// storage order.  The zero mode is stored but its coefficient stays pinned
/// to zero (zero global average).

#include <cstddef>
#include <stdexcept>

#include "gsp/torus.hpp"

namespace gsp {

struct FreqLattice {
    int N = 0;

    FreqLattice() = default;
    explicit FreqLattice(int N_) : N(N_) {
        if (N_ <= 0) throw std::invalid_argument("FreqLattice: N must be positive");
    }

    int side() const { return 2 * N + 1; }
    std::size_t size() const {
        const std::size_t m = static_cast<std::size_t>(side());
        return m * m * m;
    }

    /// Lexicographic index of mode n, components in [-N, N].
    std::size_t index(const Int3& n) const {
        const int m = side();
        return (static_cast<std::size_t>(n[0] + N) * m + (n[1] + N)) * m + (n[2] + N);
    }

    /// Inverse of index().
    Int3 mode(std::size_t idx) const {
        const int m = side();
        const int n3 = static_cast<int>(idx % m) - N;
        idx /= m;
        const int n2 = static_cast<int>(idx % m) - N;
        const int n1 = static_cast<int>(idx / m) - N;
        return {n1, n2, n3};
    }

    bool contains(const Int3& n) const {
        return n[0] >= -N && n[0] <= N && n[1] >= -N && n[1] <= N &&
               n[2] >= -N && n[2] <= N;
    }

    /// Visit every mode in storage order: fn(index, n).
    template <class Fn>
    void for_each(Fn&& fn) const {
        std::size_t idx = 0;
        for (int n1 = -N; n1 <= N; ++n1)
            for (int n2 = -N; n2 <= N; ++n2)
                for (int n3 = -N; n3 <= N; ++n3, ++idx)
                    fn(idx, Int3{n1, n2, n3});
    }

    bool operator==(const FreqLattice& o) const { return N == o.N; }
};

}  // namespace gsp
