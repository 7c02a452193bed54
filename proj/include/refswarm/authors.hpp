#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

namespace refswarm {

// Canonical author identity: last name plus first/middle initials, all
// lowercase. Two raw name strings that agree on this triple are treated as
// the same person; no further disambiguation is attempted.
struct AuthorKey {
    std::string last;   // non-empty, case-folded, trimmed
    char first = 0;     // lowercase initial, or 0 if absent
    char middle = 0;    // lowercase initial, or 0 if absent

    auto operator<=>(const AuthorKey&) const = default;
};

// Parses a raw name into an AuthorKey. Whitespace-separated tokens; the last
// token is the last name, the first token yields the first initial, and the
// token before the last one yields the middle initial (so "Maria A.
// Riverton" -> (riverton, m, a)). Folding is ASCII-only.
// Throws ParseError on empty/whitespace-only input.
AuthorKey normalize_author_name(const std::string& raw);

// Renders a key back to a parseable name, e.g. "m. a. riverton".
// normalize_author_name(render_author_key(k)) == k.
std::string render_author_key(const AuthorKey& key);

struct AuthorKeyHash {
    std::size_t operator()(const AuthorKey& k) const {
        std::size_t h = std::hash<std::string>{}(k.last);
        h ^= (static_cast<std::size_t>(k.first) * 131 +
              static_cast<std::size_t>(k.middle)) + 0x9e3779b9 + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace refswarm
