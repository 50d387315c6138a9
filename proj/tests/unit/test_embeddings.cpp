#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "conet/embeddings.hpp"
#include "conet/error.hpp"
#include "test_util.hpp"

using namespace conet;

namespace {

EmbeddingTable table_of(std::initializer_list<std::pair<std::string, std::vector<double>>> rows) {
    EmbeddingTable t(rows.begin()->second.size(), "test");
    for (const auto& [w, v] : rows) t.add(w, v);
    return t;
}

}  // namespace

TEST_CASE("load_vectors: header and rows") {
    testutil::TempDir dir;
    testutil::write_file(dir / "v.vec", "2 3\ncat 1 0 0\ndog 0.5 0.5 -1e-3\n");
    const auto t = load_vectors(dir / "v.vec");
    CHECK(t.dim() == 3);
    CHECK(t.size() == 2);
    REQUIRE(t.vector("dog"));
    CHECK((*t.vector("dog"))[2] == doctest::Approx(-1e-3));
}

TEST_CASE("load_vectors: headerless file infers dimension") {
    testutil::TempDir dir;
    testutil::write_file(dir / "v.vec", "cat 1 0\ndog 0 1\n");
    const auto t = load_vectors(dir / "v.vec");
    CHECK(t.dim() == 2);
    CHECK(t.size() == 2);
}

TEST_CASE("load_vectors: wrong row length is reported at its line") {
    testutil::TempDir dir;
    testutil::write_file(dir / "v.vec", "3 3\ncat 1 0 0\ndog 1 2 3 4\nfox 1 1 1\n");
    try {
        load_vectors(dir / "v.vec");
        FAIL("expected an error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 3);
    }
    // filtered rows are still validated
    const std::unordered_set<std::string> only{"cat"};
    CHECK_THROWS_AS(load_vectors(dir / "v.vec", &only), FormatError);

    testutil::write_file(dir / "bad.vec", "cat 1 x\n");
    CHECK_THROWS_AS(load_vectors(dir / "bad.vec"), FormatError);
    testutil::write_file(dir / "empty.vec", "");
    CHECK_THROWS_AS(load_vectors(dir / "empty.vec"), FormatError);
}

TEST_CASE("load_vectors: restrict_to keeps only requested words") {
    testutil::TempDir dir;
    std::ostringstream content;
    content << "10000 4\n";
    for (int i = 0; i < 10000; ++i) content << (i == 5000 ? std::string("cat") : "w" + std::to_string(i)) << " 1 2 3 " << i << "\n";
    testutil::write_file(dir / "big.vec", content.str());
    const std::unordered_set<std::string> only{"cat", "absent"};
    const auto t = load_vectors(dir / "big.vec", &only);
    CHECK(t.size() == 1);
    CHECK(t.contains("cat"));
    CHECK((*t.vector("cat"))[3] == 5000.0);
}

TEST_CASE("load_vectors: first occurrence of a duplicate wins") {
    testutil::TempDir dir;
    testutil::write_file(dir / "v.vec", "cat 1 0\ncat 0 1\n");
    const auto t = load_vectors(dir / "v.vec");
    CHECK(t.size() == 1);
    CHECK((*t.vector("cat"))[0] == 1.0);
}

TEST_CASE("write_vectors round trip is exact") {
    testutil::TempDir dir;
    const auto t = synthetic_table({"alpha", "beta", "gamma", "δέλτα"}, 17, 9);
    write_vectors(t, dir / "out.vec");
    const auto back = load_vectors(dir / "out.vec");
    CHECK(back.dim() == t.dim());
    REQUIRE(back.size() == t.size());
    for (const auto& w : t.words()) {
        const auto a = *t.vector(w);
        const auto b = *back.vector(w);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("cosine: analytic values") {
    const auto t = table_of({{"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"c", {1, 2, 2}}, {"d", {2, 1, 2}}, {"z", {0, 0, 0}}});
    CHECK(*cosine(t, "c", "c") == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*cosine(t, "a", "b") == 0.0);
    CHECK(*cosine(t, "c", "d") == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(!cosine(t, "a", "missing"));
    CHECK(!cosine(t, "a", "z"));  // zero vector is treated as absent

    const auto t2 = table_of({{"x", {1, 0}}, {"y", {0, 1}}});
    CHECK(*cosine(t2, "x", "y") == 0.0);
}

TEST_CASE("cosine: symmetric and bounded") {
    std::vector<std::string> vocab;
    for (int i = 0; i < 60; ++i) vocab.push_back("w" + std::to_string(i));
    const auto t = synthetic_table(vocab, 8, 3);
    for (const auto& a : vocab)
        for (const auto& b : vocab) {
            const double ab = *cosine(t, a, b);
            CHECK(ab == *cosine(t, b, a));
            CHECK(std::fabs(ab) <= 1.0 + 1e-12);
        }
}

TEST_CASE("synthetic_table: deterministic unit vectors, pure per word") {
    const std::vector<std::string> vocab{"sun", "moon", "star"};
    const auto a = synthetic_table(vocab, 300, 42);
    const auto b = synthetic_table(vocab, 300, 42);
    CHECK(a == b);
    for (const auto& w : vocab) CHECK(*a.norm(w) == doctest::Approx(1.0).epsilon(1e-12));
    // a word's vector does not depend on the rest of the vocabulary
    const auto c = synthetic_table({"star"}, 300, 42);
    const auto x = *a.vector("star");
    const auto y = *c.vector("star");
    CHECK(std::equal(x.begin(), x.end(), y.begin()));
    CHECK(!(synthetic_table(vocab, 300, 43) == a));
    CHECK(a.source_id() == "synthetic:42");
}

TEST_CASE("synthetic_table: distinct words get distinct vectors") {
    std::vector<std::string> vocab;
    for (int i = 0; i < 10000; ++i) vocab.push_back("word" + std::to_string(i));
    const auto t = synthetic_table(vocab, 300, 1);
    std::set<std::vector<double>> seen;
    for (const auto& w : vocab) {
        const auto v = *t.vector(w);
        seen.insert(std::vector<double>(v.begin(), v.end()));
    }
    CHECK(seen.size() == vocab.size());
}

TEST_CASE("EmbeddingTable: add preconditions") {
    EmbeddingTable t(2, "x");
    t.add("a", std::vector<double>{1, 2});
    CHECK_THROWS_AS(t.add("a", std::vector<double>{1, 2}), PreconditionError);
    CHECK_THROWS_AS(t.add("b", std::vector<double>{1, 2, 3}), PreconditionError);
}
