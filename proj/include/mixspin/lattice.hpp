#pragma once

#include "mixspin/spin.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace mixspin {

enum class Boundary { periodic, open };

// Alternating (S, 1/2) chain. Sites are 0-based: even sites carry spin S,
// odd sites carry spin 1/2.
struct ChainSpec {
    int sites = 2;
    SpinQuantum spin{1};
    double coupling_kelvin = 1.0; // J / k_B
    Boundary boundary = Boundary::periodic;

    SpinQuantum site_spin(int site) const { return site % 2 == 0 ? spin : spin_half; }
    int site_dimension(int site) const { return site_spin(site).dimension(); }

    // (2S+1)^(n/2) 2^(n/2); throws ValidationError on overflow past size_t.
    std::size_t hilbert_dimension() const;

    // Nearest-neighbour bonds (i, j). Periodic chains include (n-1, 0), so a
    // periodic n = 2 chain carries the same bond twice.
    std::vector<std::pair<int, int>> bonds() const;
    bool adjacent(int i, int j) const;

    // Throws ValidationError for odd or too-small n, or non-finite coupling.
    void validate() const;
};

// I x ... x op x ... x I with op acting on `site`.
Matrix embed(const Matrix& op, int site, const ChainSpec& spec);

} // namespace mixspin
