#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pathpool/error.hpp"
#include "pathpool/evaluation.hpp"
#include "pathpool/prompt.hpp"

using namespace pathpool;

TEST(RenderTriple, Format) {
  EXPECT_EQ(render_triple({"A", "r", "B", 0.0, 0}), "(A, r, B)");
}

TEST(AssemblePrompt, SingleTriple) {
  TripleSequence seq;
  seq.triples.push_back({"A", "r", "B", 1.0, 0});
  auto bundle = assemble_prompt({"q", "Q?", {"A"}, {}}, seq);
  EXPECT_EQ(bundle.user, "Triplets:\n(A, r, B)\n\nQuestion:\nQ?");
}

TEST(AssemblePrompt, KeepsGivenOrder) {
  TripleSequence seq;
  seq.triples.push_back({"t3", "r", "x", 0.53, 2});
  seq.triples.push_back({"t2", "r", "x", 0.615, 1});
  seq.triples.push_back({"t1", "r", "x", 0.93, 0});
  auto user = assemble_prompt({"q", "Q?", {}, {}}, seq).user;
  const auto p3 = user.find("(t3");
  const auto p2 = user.find("(t2");
  const auto p1 = user.find("(t1");
  EXPECT_LT(p3, p2);
  EXPECT_LT(p2, p1);
}

TEST(AssemblePrompt, EmptyBlockAllowed) {
  auto bundle = assemble_prompt({"q", "Q?", {}, {}}, TripleSequence{});
  EXPECT_EQ(bundle.user, "Triplets:\n\n\nQuestion:\nQ?");
}

TEST(AssemblePrompt, Deterministic) {
  TripleSequence seq;
  seq.triples.push_back({"A", "r", "B", 1.0, 0});
  QueryRecord q{"q", "Q?", {"A"}, {}};
  auto a = assemble_prompt(q, seq);
  auto b = assemble_prompt(q, seq);
  EXPECT_EQ(prompt_hash(a), prompt_hash(b));
  EXPECT_EQ(prompt_hash(a).size(), 16u);
  seq.triples[0].tail = "C";
  EXPECT_NE(prompt_hash(a), prompt_hash(assemble_prompt(q, seq)));
  auto messages = to_messages(a);
  ASSERT_EQ(messages.size(), 4u);
  EXPECT_EQ(messages[0].role, "system");
  EXPECT_EQ(messages[2].role, "assistant");
  EXPECT_EQ(messages[3].content, a.user);
}

TEST(ParseAnswers, ExemplarCompletion) {
  auto answers = parse_answers(prompt_template::kExemplarAssistant);
  EXPECT_EQ(answers, (std::vector<std::string>{"2014 World Series", "2012 World Series",
                                               "2010 World Series"}));
}

TEST(ParseAnswers, EdgeCases) {
  EXPECT_TRUE(parse_answers("no answers here").empty());
  EXPECT_EQ(parse_answers("ans: X\nans: x"), std::vector<std::string>{"X"});
  EXPECT_EQ(parse_answers("  ANS:  spaced  \r\nnot ans: this\nAns:\nans:y"),
            (std::vector<std::string>{"spaced", "y"}));
}

TEST(ParseAnswers, KDistinctLinesGiveKAnswers) {
  for (int k = 0; k < 20; ++k) {
    std::string text = "reasoning first\n";
    for (int i = 0; i < k; ++i) text += "ans: answer " + std::to_string(i) + "\n";
    auto answers = parse_answers(text);
    ASSERT_EQ(answers.size(), static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) EXPECT_EQ(answers[i], "answer " + std::to_string(i));
  }
}

TEST(NormalizeAnswer, Rules) {
  EXPECT_EQ(normalize_answer("  The   Giants. "), "the giants");
  EXPECT_EQ(normalize_answer("\"2010 World Series\""), "2010 world series");
  EXPECT_EQ(normalize_answer("(x)!"), "x");
  EXPECT_EQ(normalize_answer("..."), "");
  EXPECT_EQ(normalize_answer("AT&T Park"), "at&t park");
}

TEST(Evaluate, Examples) {
  const std::vector<std::string> ws = {"2010 World Series", "2012 World Series",
                                       "2014 World Series"};
  auto perfect = evaluate(ws, ws);
  EXPECT_TRUE(perfect.hit);
  EXPECT_DOUBLE_EQ(perfect.f1, 1.0);

  const std::vector<std::string> x = {"x"};
  const std::vector<std::string> y = {"y"};
  auto disjoint = evaluate(x, y);
  EXPECT_FALSE(disjoint.hit);
  EXPECT_EQ(disjoint.f1, 0.0);

  const std::vector<std::string> ab = {"a", "b"};
  const std::vector<std::string> acd = {"a", "c", "d"};
  auto partial = evaluate(ab, acd);
  EXPECT_TRUE(partial.hit);
  EXPECT_DOUBLE_EQ(partial.precision, 0.5);
  EXPECT_DOUBLE_EQ(partial.recall, 1.0 / 3.0);
  EXPECT_NEAR(partial.f1, 0.4, 1e-12);
}

TEST(Evaluate, HitUsesFirstPredictionOnly) {
  const std::vector<std::string> preds = {"wrong", "Right"};
  const std::vector<std::string> gold = {"right"};
  auto r = evaluate(preds, gold);
  EXPECT_FALSE(r.hit);
  EXPECT_TRUE(r.any_hit);
}

TEST(Evaluate, NoPredictionsAndEmptyGold) {
  const std::vector<std::string> none;
  const std::vector<std::string> gold = {"a"};
  auto r = evaluate(none, gold);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_THROW(evaluate(gold, none), ConfigError);
}

TEST(Evaluate, F1BoundsAndIdentityOnRandomSets) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 1000; ++round) {
    std::vector<std::string> preds;
    std::vector<std::string> gold;
    for (int i = 0; i < static_cast<int>(rng() % 5); ++i) preds.push_back(std::to_string(rng() % 6));
    for (int i = 0; i < 1 + static_cast<int>(rng() % 4); ++i) gold.push_back(std::to_string(rng() % 6));
    auto r = evaluate(preds, gold);
    EXPECT_GE(r.f1, 0.0);
    EXPECT_LE(r.f1, 1.0);
    std::set<std::string> ps(preds.begin(), preds.end());
    std::set<std::string> gs(gold.begin(), gold.end());
    EXPECT_EQ(r.f1 == 1.0, ps == gs);
  }
}

TEST(Aggregate, Means) {
  std::vector<EvalResult> results(2);
  results[0].hit = true;
  results[0].f1 = 1.0;
  results[0].any_hit = true;
  results[1].f1 = 0.5;
  results[1].any_hit = true;
  auto s = aggregate(results);
  EXPECT_EQ(s.query_count, 2u);
  EXPECT_DOUBLE_EQ(s.hit_at_1, 0.5);
  EXPECT_DOUBLE_EQ(s.macro_f1, 0.75);
  EXPECT_DOUBLE_EQ(s.any_hit, 1.0);
  EXPECT_EQ(aggregate({}).query_count, 0u);
}
