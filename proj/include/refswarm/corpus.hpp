#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "refswarm/authors.hpp"

namespace refswarm {

// One bibliographic record. `referenced_authors` is a multiset: an author
// cited by three references of this manuscript appears three times.
struct ManuscriptRecord {
    std::string id;
    std::vector<AuthorKey> authors;             // length >= 1, no duplicates
    std::vector<AuthorKey> referenced_authors;  // may be empty

    int author_count() const { return static_cast<int>(authors.size()); }

    bool operator==(const ManuscriptRecord&) const = default;
};

struct Corpus {
    std::vector<ManuscriptRecord> manuscripts;  // ids pairwise distinct

    bool operator==(const Corpus&) const = default;
};

// Reads the line-delimited corpus format: one JSON object per line with
// fields `id` (string), `authors` (array of strings, non-empty) and
// `references` (array of strings, one entry per citing reference, repeats
// allowed). Author strings are normalized on input.
// Throws ParseError (with line number) on malformed lines, duplicate ids,
// empty author lists, or two author entries collapsing to the same key.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_string(const std::string& text);
Corpus parse_corpus_file(const std::string& path);

// Writes the same format with canonically rendered author names;
// parse_corpus(write_corpus(c)) == c.
void write_corpus(const Corpus& corpus, std::ostream& out);
std::string write_corpus_string(const Corpus& corpus);

}  // namespace refswarm
