#ifndef UICT_MOVES_HPP
#define UICT_MOVES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uict {

/// Elementary growth step. Plus attaches a triangle with a fresh vertex and
/// lengthens the boundary by one edge; Minus consumes the front boundary
/// vertex and shortens it by one.
enum class Move : std::int8_t { Minus = -1, Plus = +1 };

using MoveSequence = std::vector<Move>;

constexpr int sign(Move m) { return static_cast<int>(m); }

inline char to_char(Move m) { return m == Move::Plus ? '+' : '-'; }

inline MoveSequence parse_moves(std::string_view text) {
    MoveSequence out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '+')
            out.push_back(Move::Plus);
        else if (c == '-')
            out.push_back(Move::Minus);
        else if (c == ' ' || c == ',')
            continue;
        else
            throw std::invalid_argument(std::string("invalid move character '") + c + "'");
    }
    return out;
}

inline std::string format_moves(const MoveSequence& moves) {
    std::string s;
    s.reserve(moves.size());
    for (Move m : moves) s.push_back(to_char(m));
    return s;
}

} // namespace uict

#endif
