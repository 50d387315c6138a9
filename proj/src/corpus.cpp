#include "conet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "conet/csv.hpp"
#include "conet/error.hpp"
#include "conet/prng.hpp"

#include "builtin_stopwords.inc"

namespace conet {

namespace fs = std::filesystem;

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
    return *n;
}

icu::UnicodeString normalize_nfc(const icu::UnicodeString& s) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = nfc().normalize(s, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    return out;
}

bool is_mark(UChar32 c) {
    switch (u_charType(c)) {
        case U_NON_SPACING_MARK:
        case U_COMBINING_SPACING_MARK:
        case U_ENCLOSING_MARK:
            return true;
        default:
            return false;
    }
}

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::unordered_set<std::string> parse_stopword_text(std::string_view text) {
    std::unordered_set<std::string> words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& tok : tokenize(line)) words.insert(std::move(tok));
    }
    return words;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error("read failure on " + path.string());
    return std::move(ss).str();
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open manifest " + path.string());

    Manifest manifest;
    manifest.source = path;
    const fs::path base = path.parent_path();

    std::string line;
    std::size_t lineno = 0;
    int col_id = -1, col_path = -1, col_lang = -1, col_tag = -1;
    bool have_header = false;
    std::unordered_map<std::string, std::size_t> seen;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;

        std::vector<std::string> fields;
        try {
            fields = csv::split(line);
        } catch (const FormatError& e) {
            throw FormatError(std::string("manifest: ") + e.what(), lineno);
        }
        for (auto& f : fields) f = trim(f);

        if (!have_header) {
            for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
                const auto& name = fields[static_cast<std::size_t>(i)];
                if (name == "text_id") col_id = i;
                else if (name == "path") col_path = i;
                else if (name == "language") col_lang = i;
                else if (name == "dataset_tag") col_tag = i;
            }
            if (col_id < 0 || col_path < 0 || col_lang < 0 || col_tag < 0)
                throw FormatError("manifest header must name text_id,path,language,dataset_tag",
                                  lineno);
            have_header = true;
            continue;
        }

        const auto needed = static_cast<std::size_t>(std::max({col_id, col_path, col_lang, col_tag}));
        if (fields.size() <= needed)
            throw FormatError("manifest row has " + std::to_string(fields.size()) + " fields",
                              lineno);

        ManifestEntry entry;
        entry.text_id = fields[static_cast<std::size_t>(col_id)];
        entry.language = fields[static_cast<std::size_t>(col_lang)];
        entry.dataset_tag = fields[static_cast<std::size_t>(col_tag)];
        entry.line = lineno;
        const fs::path raw_path = fields[static_cast<std::size_t>(col_path)];
        if (entry.text_id.empty()) throw FormatError("manifest row has empty text_id", lineno);
        if (raw_path.empty()) throw FormatError("manifest row has empty path", lineno);
        if (entry.language.empty()) throw FormatError("manifest row has empty language", lineno);
        entry.path = raw_path.is_absolute() ? raw_path : base / raw_path;

        if (auto [it, inserted] = seen.emplace(entry.text_id, lineno); !inserted) {
            throw FormatError("duplicate text_id \"" + entry.text_id + "\" on lines " +
                              std::to_string(it->second) + " and " + std::to_string(lineno));
        }
        if (std::ifstream probe(entry.path, std::ios::binary); !probe) {
            throw FormatError("unreadable text file " + entry.path.string(), lineno);
        }
        manifest.entries.push_back(std::move(entry));
    }

    if (!have_header) throw FormatError("empty manifest");
    return manifest;
}

const StopwordLists& StopwordLists::builtin() {
    static const StopwordLists lists = [] {
        StopwordLists l;
        l.set("en", parse_stopword_text(kBuiltinEnglishStopwords));
        return l;
    }();
    return lists;
}

void StopwordLists::load_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("stopword directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(f.stem().string(), f);
}

void StopwordLists::load_file(const std::string& language, const fs::path& path) {
    set(language, parse_stopword_text(read_text_file(path)));
}

void StopwordLists::set(const std::string& language, std::unordered_set<std::string> words) {
    lists_[language] = std::move(words);
}

const std::unordered_set<std::string>* StopwordLists::find(const std::string& language) const {
    auto it = lists_.find(language);
    return it == lists_.end() ? nullptr : &it->second;
}

std::vector<std::string> tokenize(std::string_view utf8) {
    const icu::UnicodeString text = normalize_nfc(icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));

    std::vector<std::string> tokens;
    icu::UnicodeString current;
    auto flush = [&] {
        if (current.isEmpty()) return;
        std::string out;
        normalize_nfc(current).toUTF8String(out);
        tokens.push_back(std::move(out));
        current.remove();
    };

    for (int32_t i = 0; i < text.length();) {
        const UChar32 c = text.char32At(i);
        i = text.moveIndex32(i, 1);
        if (u_isalpha(c)) {
            current.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
        } else if (!is_mark(c)) {
            flush();
        }
    }
    flush();
    return tokens;
}

Document remove_stopwords(const Document& doc, const StopwordLists& stopwords) {
    const auto* list = stopwords.find(doc.language);
    if (list == nullptr)
        throw PreconditionError("no stopword list configured for language \"" + doc.language + "\"");
    Document out = doc;
    out.tokens.clear();
    for (const auto& t : doc.tokens)
        if (!list->contains(t)) out.tokens.push_back(t);
    out.stopwords_filtered = true;
    return out;
}

Document preprocess(std::string_view raw, const std::string& language, bool filter_stopwords,
                    const StopwordLists& stopwords, std::string text_id) {
    Document doc;
    doc.text_id = std::move(text_id);
    doc.language = language;
    doc.tokens = tokenize(raw);
    return filter_stopwords ? remove_stopwords(doc, stopwords) : doc;
}

Document truncate(const Document& doc, std::size_t n) {
    if (n == 0) throw PreconditionError("truncate: n must be >= 1");
    Document out = doc;
    if (out.tokens.size() > n) out.tokens.resize(n);
    out.requested_size = doc.requested_size ? std::min(doc.requested_size, n) : n;
    out.short_document = out.tokens.size() < out.requested_size;
    return out;
}

ShuffleSet make_shuffles(const Document& doc, std::size_t count, std::uint64_t seed) {
    if (count < 2) throw PreconditionError("make_shuffles: replica count must be >= 2");
    if (doc.size() < 2)
        throw PreconditionError("document \"" + doc.text_id + "\" too short to shuffle (" +
                                std::to_string(doc.size()) + " tokens)");
    ShuffleSet set;
    set.original = doc;
    set.seed = seed;
    set.replicas.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        Document replica = doc;
        Xoshiro256ss gen(derive_key(seed, doc.text_id, r));
        auto& t = replica.tokens;
        for (std::size_t i = t.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(gen.below(i + 1));
            std::swap(t[i], t[j]);
        }
        set.replicas.push_back(std::move(replica));
    }
    return set;
}

}  // namespace conet
