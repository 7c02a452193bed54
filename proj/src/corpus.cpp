#include "refswarm/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

using nlohmann::json;

ManuscriptRecord record_from_json(const json& j, std::size_t line_no) {
    if (!j.is_object()) throw ParseError("record is not an object", line_no);
    ManuscriptRecord rec;
    try {
        rec.id = j.at("id").get<std::string>();
        if (rec.id.empty()) throw ParseError("empty manuscript id", line_no);

        const auto& authors = j.at("authors");
        if (!authors.is_array() || authors.empty())
            throw ParseError("record '" + rec.id + "' has no authors", line_no);

        std::unordered_set<AuthorKey, AuthorKeyHash> seen;
        for (const auto& a : authors) {
            AuthorKey key = normalize_author_name(a.get<std::string>());
            if (!seen.insert(key).second)
                throw ParseError("record '" + rec.id + "' lists author '" +
                                     render_author_key(key) + "' twice",
                                 line_no);
            rec.authors.push_back(std::move(key));
        }

        if (j.contains("references")) {
            for (const auto& r : j.at("references"))
                rec.referenced_authors.push_back(
                    normalize_author_name(r.get<std::string>()));
        }
    } catch (const ParseError& e) {
        if (e.line) throw;
        throw ParseError(e.what(), line_no);  // attach the line to name errors
    } catch (const json::exception& e) {
        throw ParseError(e.what(), line_no);
    }
    return rec;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
    Corpus corpus;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        ManuscriptRecord rec = record_from_json(j, line_no);
        if (!ids.insert(rec.id).second)
            throw ParseError("duplicate manuscript id '" + rec.id + "'", line_no);
        corpus.manuscripts.push_back(std::move(rec));
    }
    return corpus;
}

Corpus parse_corpus_string(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

Corpus parse_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    return parse_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& rec : corpus.manuscripts) {
        nlohmann::ordered_json j;
        j["id"] = rec.id;
        auto& authors = j["authors"] = json::array();
        for (const auto& a : rec.authors) authors.push_back(render_author_key(a));
        auto& refs = j["references"] = json::array();
        for (const auto& r : rec.referenced_authors)
            refs.push_back(render_author_key(r));
        out << j.dump() << '\n';
    }
}

std::string write_corpus_string(const Corpus& corpus) {
    std::ostringstream out;
    write_corpus(corpus, out);
    return out.str();
}

}  // namespace refswarm
