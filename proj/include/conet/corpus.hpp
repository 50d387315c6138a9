#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace conet {

struct ManifestEntry {
    std::string text_id;
    std::filesystem::path path;  // resolved against the manifest's directory
    std::string language;
    std::string dataset_tag;
    std::size_t line = 0;  // 1-based line in the manifest file
};

struct Manifest {
    std::filesystem::path source;
    std::vector<ManifestEntry> entries;
};

// Reads a `text_id,path,language,dataset_tag` CSV. Throws FormatError on
// malformed rows, duplicate ids, unreadable paths or an empty file.
Manifest load_manifest(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

// Per-language stopword sets. English is compiled in; other languages (or a
// replacement English list) come from `<lang>.txt` files.
class StopwordLists {
public:
    static const StopwordLists& builtin();

    // Loads every `<lang>.txt` in `dir`, replacing lists for the same language.
    void load_directory(const std::filesystem::path& dir);
    void load_file(const std::string& language, const std::filesystem::path& path);
    void set(const std::string& language, std::unordered_set<std::string> words);

    // nullptr when no list is configured for `language`.
    const std::unordered_set<std::string>* find(const std::string& language) const;

private:
    std::map<std::string, std::unordered_set<std::string>> lists_;
};

// Maximal runs of Unicode letters, NFC-normalized and simple-case-folded.
// Combining marks are dropped without splitting a word; every other
// non-letter code point is a separator.
std::vector<std::string> tokenize(std::string_view utf8);

struct Document {
    std::string text_id;
    std::string language;
    std::vector<std::string> tokens;
    bool stopwords_filtered = false;
    bool short_document = false;     // set by truncate when fewer tokens than requested
    std::size_t requested_size = 0;  // 0 when never truncated

    std::size_t size() const noexcept { return tokens.size(); }
};

Document preprocess(std::string_view raw, const std::string& language, bool filter_stopwords,
                    const StopwordLists& stopwords = StopwordLists::builtin(),
                    std::string text_id = {});

// Throws PreconditionError when no list exists for doc.language.
Document remove_stopwords(const Document& doc, const StopwordLists& stopwords);

Document truncate(const Document& doc, std::size_t n);

struct ShuffleSet {
    Document original;
    std::vector<Document> replicas;
    std::uint64_t seed = 0;
};

// Word-level Fisher-Yates shuffles; replica r draws from the stream keyed on
// (seed, text_id, r) as documented in prng.hpp.
ShuffleSet make_shuffles(const Document& doc, std::size_t count, std::uint64_t seed);

}  // namespace conet
