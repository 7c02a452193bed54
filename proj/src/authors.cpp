#include "refswarm/authors.hpp"

#include <cctype>
#include <vector>

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

char fold(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::vector<std::string> split_tokens(const std::string& raw) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(fold(c));
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace

AuthorKey normalize_author_name(const std::string& raw) {
    const auto tokens = split_tokens(raw);
    if (tokens.empty()) throw ParseError("malformed author name: '" + raw + "'");

    AuthorKey key;
    key.last = tokens.back();
    if (tokens.size() >= 2) key.first = tokens.front().front();
    if (tokens.size() >= 3) key.middle = tokens[tokens.size() - 2].front();
    return key;
}

std::string render_author_key(const AuthorKey& key) {
    std::string out;
    if (key.first) {
        out += key.first;
        out += ". ";
    }
    if (key.first && key.middle) {
        out += key.middle;
        out += ". ";
    }
    out += key.last;
    return out;
}

}  // namespace refswarm
