#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smsd/errors.hpp"
#include "smsd/linalg.hpp"

namespace smsd {

enum class Scheme { SM, SMX };

inline const char* scheme_name(Scheme s) { return s == Scheme::SM ? "sm" : "smx"; }

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

// Bits per channel use. SM carries log2(Nt) antenna-index bits on top of the
// constellation bits; SMX sends one symbol per antenna.
inline int spectral_efficiency(Scheme scheme, int nt, int mod_order) {
    if (!is_power_of_two(mod_order) || mod_order < 2)
        throw NonPowerOfTwo("spectral_efficiency: constellation order must be a power of two >= 2");
    if (scheme == Scheme::SM) {
        if (!is_power_of_two(nt))
            throw NonPowerOfTwo("spectral_efficiency: SM needs a power-of-two antenna count");
        return log2_exact(nt) + log2_exact(mod_order);
    }
    if (nt < 1) throw NonPowerOfTwo("spectral_efficiency: need nt >= 1");
    return nt * log2_exact(mod_order);
}

// QAM constellation with unit average energy. points[k] is the point whose
// bit label equals k. Square and rectangular orders use per-axis
// binary-reflected Gray labels; the cross shapes (32, 128) walk the grid in
// serpentine column order and label position p with gray(p).
struct Constellation {
    int order = 0;
    cvec points;

    // points grouped by distinct imaginary level, each group ordered by
    // ascending real part; used by the interval-based decoders
    struct ImGroup {
        double im = 0.0;
        std::vector<int> labels;
    };
    std::vector<ImGroup> im_groups;

    int bits() const { return log2_exact(order); }
};

namespace detail {

inline unsigned to_gray(unsigned v) { return v ^ (v >> 1); }

inline unsigned from_gray(unsigned g) {
    unsigned b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

inline void build_im_groups(Constellation& c) {
    std::map<double, std::vector<int>> groups;
    for (int k = 0; k < c.order; ++k) groups[c.points[k].imag()].push_back(k);
    c.im_groups.clear();
    for (auto& [im, labels] : groups) {
        std::sort(labels.begin(), labels.end(), [&](int a, int b) {
            return c.points[a].real() < c.points[b].real();
        });
        c.im_groups.push_back({im, labels});
    }
}

// grid of odd-integer levels, normalized afterwards
inline Constellation build_separable(int m_order, int re_bits, int im_bits) {
    const int kre = 1 << re_bits;
    const int kim = 1 << im_bits;
    Constellation c;
    c.order = m_order;
    c.points.resize(m_order);
    long long energy = 0;
    for (int label = 0; label < m_order; ++label) {
        const unsigned re_g = static_cast<unsigned>(label) >> im_bits;
        const unsigned im_g = static_cast<unsigned>(label) & ((1u << im_bits) - 1u);
        const int ri = static_cast<int>(from_gray(re_g));
        const int ii = static_cast<int>(from_gray(im_g));
        const int re = (kre - 1) - 2 * ri;
        const int im = im_bits == 0 ? 0 : (kim - 1) - 2 * ii;
        c.points[label] = cxd(re, im);
        energy += static_cast<long long>(re) * re + static_cast<long long>(im) * im;
    }
    const double scale = std::sqrt(static_cast<double>(m_order) / static_cast<double>(energy));
    for (auto& p : c.points) p *= scale;
    return c;
}

inline Constellation build_cross(int m_order) {
    const int width = m_order == 32 ? 6 : 12;
    const int corner = m_order == 32 ? 5 : 9;  // |re| and |im| at/above this are cut
    std::vector<std::pair<int, int>> grid;
    for (int col = 0; col < width; ++col) {
        const int re = 2 * col - (width - 1);
        std::vector<int> ims;
        for (int row = 0; row < width; ++row) {
            const int im = 2 * row - (width - 1);
            if (std::abs(re) >= corner && std::abs(im) >= corner) continue;
            ims.push_back(im);
        }
        if (col % 2 == 1) std::reverse(ims.begin(), ims.end());
        for (int im : ims) grid.emplace_back(re, im);
    }
    Constellation c;
    c.order = m_order;
    c.points.resize(m_order);
    long long energy = 0;
    for (int p = 0; p < m_order; ++p) {
        const unsigned label = to_gray(static_cast<unsigned>(p));
        c.points[label] = cxd(grid[p].first, grid[p].second);
        energy += static_cast<long long>(grid[p].first) * grid[p].first +
                  static_cast<long long>(grid[p].second) * grid[p].second;
    }
    const double scale = std::sqrt(static_cast<double>(m_order) / static_cast<double>(energy));
    for (auto& p : c.points) p *= scale;
    return c;
}

}  // namespace detail

inline Constellation build_constellation(int m_order) {
    Constellation c;
    switch (m_order) {
        case 2:
            c = detail::build_separable(2, 1, 0);
            break;
        case 4:
            c = detail::build_separable(4, 1, 1);
            break;
        case 8:
            c = detail::build_separable(8, 2, 1);  // rectangular 4x2
            break;
        case 16:
            c = detail::build_separable(16, 2, 2);
            break;
        case 32:
            c = detail::build_cross(32);
            break;
        case 64:
            c = detail::build_separable(64, 3, 3);
            break;
        case 128:
            c = detail::build_cross(128);
            break;
        default:
            throw UnsupportedOrder("build_constellation: unsupported order " +
                                   std::to_string(m_order));
    }
    detail::build_im_groups(c);
    return c;
}

// One transmission: SM activates a single antenna with one symbol, SMX
// carries one symbol per antenna. Antenna indices are 0-based.
struct TxVector {
    Scheme scheme = Scheme::SM;
    int nt = 0;
    int antenna = 0;
    std::vector<int> symbols;

    bool operator==(const TxVector&) const = default;
};

// Dense Nt x 1 form; SMX symbols are scaled by 1/sqrt(Nt) so that the
// average transmit energy stays one.
inline cvec dense(const TxVector& x, const Constellation& c) {
    cvec v(x.nt, cxd(0.0, 0.0));
    if (x.scheme == Scheme::SM) {
        v[x.antenna] = c.points[x.symbols[0]];
    } else {
        const double s = 1.0 / std::sqrt(static_cast<double>(x.nt));
        for (int a = 0; a < x.nt; ++a) v[a] = c.points[x.symbols[a]] * s;
    }
    return v;
}

// First log2(Nt) bits select the antenna (natural binary, antenna 0 is the
// all-zero prefix), remaining bits select the constellation point.
inline TxVector sm_map(std::uint32_t bits, int nt, const Constellation& c) {
    if (!is_power_of_two(nt)) throw NonPowerOfTwo("sm_map: nt must be a power of two");
    const int m = log2_exact(nt) + c.bits();
    if (bits >> m) throw LengthMismatch("sm_map: word wider than m bits");
    TxVector x;
    x.scheme = Scheme::SM;
    x.nt = nt;
    x.antenna = static_cast<int>(bits >> c.bits());
    x.symbols = {static_cast<int>(bits & ((1u << c.bits()) - 1u))};
    return x;
}

inline std::uint32_t sm_demap(int antenna, int symbol_label, int nt, const Constellation& c) {
    if (antenna < 0 || antenna >= nt || symbol_label < 0 || symbol_label >= c.order)
        throw OutOfRange("sm_demap: antenna or symbol out of range");
    return (static_cast<std::uint32_t>(antenna) << c.bits()) |
           static_cast<std::uint32_t>(symbol_label);
}

// Consecutive log2(M)-bit groups map to the per-antenna symbols; antenna 0
// takes the most significant group.
inline TxVector smx_map(std::uint32_t bits, int nt, const Constellation& c) {
    const int m = nt * c.bits();
    if (m > 31) throw LengthMismatch("smx_map: word wider than 31 bits");
    if (bits >> m) throw LengthMismatch("smx_map: word wider than m bits");
    TxVector x;
    x.scheme = Scheme::SMX;
    x.nt = nt;
    x.symbols.resize(nt);
    for (int a = 0; a < nt; ++a)
        x.symbols[a] =
            static_cast<int>((bits >> ((nt - 1 - a) * c.bits())) & ((1u << c.bits()) - 1u));
    return x;
}

inline std::uint32_t tx_bits(const TxVector& x, const Constellation& c) {
    if (x.scheme == Scheme::SM) return sm_demap(x.antenna, x.symbols[0], x.nt, c);
    std::uint32_t bits = 0;
    for (int a = 0; a < x.nt; ++a) {
        if (x.symbols[a] < 0 || x.symbols[a] >= c.order)
            throw OutOfRange("tx_bits: symbol out of range");
        bits = (bits << c.bits()) | static_cast<std::uint32_t>(x.symbols[a]);
    }
    return bits;
}

inline std::uint32_t smx_demap(const TxVector& x, const Constellation& c) { return tx_bits(x, c); }

// Hamming distance between the demapped bit words of two transmissions.
inline int bit_errors(const TxVector& a, const TxVector& b, const Constellation& c) {
    if (a.scheme != b.scheme || a.nt != b.nt || a.symbols.size() != b.symbols.size())
        throw ShapeMismatch("bit_errors: incompatible transmissions");
    return std::popcount(tx_bits(a, c) ^ tx_bits(b, c));
}

}  // namespace smsd
