#pragma once

// Rendering of automaton runs: a right-aligned plain-text digit grid and a
// byte-per-cell grid image with a plain-text header.
//
// Grid image layout:
//   "MAGRID <width> <height> <base>\n"
// followed by width*height bytes, row-major, first emitted row on top.
// A cell holds the digit value (0..base-1); 0xFF marks blank padding left
// of a row's most significant digit.

#include "digitdyn/automaton.hpp"
#include "digitdyn/radix.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace digitdyn {

inline constexpr std::uint8_t kGridBlank = 0xFF;

struct GridImage {
    std::uint64_t width = 0;
    std::uint64_t height = 0;
    std::uint32_t base = 0;
    std::vector<std::uint8_t> cells;  // row-major, width*height bytes
};

inline GridImage render_grid(std::span<const AutomatonState> states) {
    if (states.empty()) throw std::invalid_argument("nothing to render");
    GridImage img;
    img.base = states[0].row.base();
    img.height = states.size();
    for (const AutomatonState& s : states)
        if (s.row.size() > img.width) img.width = s.row.size();
    img.cells.assign(img.width * img.height, kGridBlank);
    for (std::uint64_t r = 0; r < img.height; ++r) {
        const DigitVector& row = states[r].row;
        for (std::size_t i = 0; i < row.size(); ++i) {
            // right-aligned: position 0 (least significant) in the last column
            img.cells[r * img.width + (img.width - 1 - i)] = row.digit(i);
        }
    }
    return img;
}

inline void write_grid(std::ostream& out, const GridImage& img) {
    out << "MAGRID " << img.width << ' ' << img.height << ' ' << img.base << '\n';
    out.write(reinterpret_cast<const char*>(img.cells.data()),
              static_cast<std::streamsize>(img.cells.size()));
}

inline std::string render_text(std::span<const AutomatonState> states) {
    if (states.empty()) throw std::invalid_argument("nothing to render");
    std::size_t cell_width = 1;
    std::size_t max_digits = 0;
    for (const AutomatonState& s : states) {
        if (s.row.size() > max_digits) max_digits = s.row.size();
        if (s.row.base() > 36) {
            for (std::size_t i = 0; i < s.row.size(); ++i) {
                std::size_t w = std::to_string(unsigned(s.row.digit(i))).size();
                if (w > cell_width) cell_width = w;
            }
        }
    }
    const bool wide = states[0].row.base() > 36;
    std::string out;
    for (const AutomatonState& s : states) {
        std::string line;
        for (std::size_t col = 0; col < max_digits; ++col) {
            std::size_t pos = max_digits - 1 - col;  // most significant first
            std::string cell;
            if (pos < s.row.size()) {
                std::uint8_t d = s.row.digit(pos);
                if (wide) {
                    cell = std::to_string(unsigned(d));
                } else {
                    static constexpr char alphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
                    cell = std::string(1, alphabet[d]);
                }
            }
            while (cell.size() < cell_width) cell.insert(cell.begin(), ' ');
            if (wide && col > 0) line.push_back(' ');
            line += cell;
        }
        out += line;
        out.push_back('\n');
    }
    return out;
}

}  // namespace digitdyn
