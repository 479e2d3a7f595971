#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pathpool/error.hpp"
#include "pathpool/sequence_io.hpp"

using namespace pathpool;

TEST(SequenceIo, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<QuerySequence> seqs;
  for (int q = 0; q < 5; ++q) {
    QuerySequence qs{"q" + std::to_string(q), {}};
    qs.sequence.source = "test";
    for (std::size_t i = 0; i < 10; ++i) {
      qs.sequence.triples.push_back({"h\"" + std::to_string(i), "rel.x", "t\t" + std::to_string(i), u(rng), i});
    }
    seqs.push_back(std::move(qs));
  }
  std::stringstream buf;
  write_sequences(buf, seqs);
  auto back = read_sequences(buf);
  ASSERT_EQ(back.size(), seqs.size());
  for (std::size_t q = 0; q < seqs.size(); ++q) {
    EXPECT_EQ(back[q].query_id, seqs[q].query_id);
    EXPECT_EQ(back[q].sequence.source, "test");
    ASSERT_EQ(back[q].sequence.size(), seqs[q].sequence.size());
    for (std::size_t i = 0; i < seqs[q].sequence.size(); ++i) {
      const auto& a = seqs[q].sequence[i];
      const auto& b = back[q].sequence[i];
      EXPECT_TRUE(a.same_triple(b));
      EXPECT_EQ(a.score, b.score);
      EXPECT_EQ(a.retrieval_rank, b.retrieval_rank);
    }
  }
}

TEST(SequenceIo, MalformedLine) {
  std::istringstream in("{\"query_id\":\"q\",\"triples\":[]}\n{\"query_id\":1}\n");
  try {
    read_sequences(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(SequenceIo, AtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "pathpool_atomic_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  std::filesystem::remove_all(dir);
}

TEST(ValidateSequence, RejectsDuplicatesAndNonFinite) {
  TripleSequence seq;
  seq.triples.push_back({"a", "r", "b", 1.0, 0});
  EXPECT_NO_THROW(validate_sequence(seq));
  seq.triples.push_back({"a", "r", "b", 0.5, 1});
  EXPECT_THROW(validate_sequence(seq), Error);
  seq.triples.back().tail = "c";
  seq.triples.back().score = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate_sequence(seq), Error);
}
