// Copyright 2026 The cnlm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"
#include "cnlm/core/perplexity.h"
#include "cnlm/core/text_io.h"
#include "cnlm/core/token.h"
#include "cnlm/core/vocabulary.h"

namespace cnlm {
namespace {

TEST(StripPunctuationTest, DropsStandalonePunctuation) {
  EXPECT_EQ(StripPunctuation({"no", ",", "they", "are", "outside", "."}),
            (Sentence{"no", "they", "are", "outside"}));
}

TEST(StripPunctuationTest, KeepsInternalPunctuationAndAcronyms) {
  EXPECT_EQ(StripPunctuation({"it's", "8:30", "p.m."}),
            (Sentence{"it's", "8:30", "p.m."}));
  EXPECT_EQ(StripPunctuation({"5,40", "u.s.a."}), (Sentence{"5,40", "u.s.a."}));
}

TEST(StripPunctuationTest, StripsEdges) {
  EXPECT_EQ(StripPunctuation({"hi!"}), (Sentence{"hi"}));
  EXPECT_EQ(StripPunctuation({"(yes)", "\"ok\"", "end."}),
            (Sentence{"yes", "ok", "end"}));
  EXPECT_EQ(StripPunctuation({"...", "--", "¿", "hola"}), (Sentence{"hola"}));
}

TEST(StripPunctuationTest, SpecialsPassThrough) {
  EXPECT_EQ(StripPunctuation({"<s>", "a", "</s>", "*DELETE*"}),
            (Sentence{"<s>", "a", "</s>", "*DELETE*"}));
}

TEST(StripPunctuationTest, OutputHasNoPurePunctuation) {
  const Sentence in{"a", "!?", "b.", ".c", "d-e", "-", "'", "x'"};
  for (const Token &t : StripPunctuation(in)) EXPECT_FALSE(IsPunctuation(t)) << t;
}

TEST(NormalizeTokenTest, Examples) {
  EXPECT_EQ(NormalizeToken("I'll"), "i'll");
  EXPECT_EQ(NormalizeToken("8:30"), "<d>");
  EXPECT_EQ(NormalizeToken("5,40"), "<d>");
  EXPECT_EQ(NormalizeToken("2026"), "<d>");
  EXPECT_EQ(NormalizeToken("abc"), "abc");
  EXPECT_EQ(NormalizeToken("ÜBER"), "über");
  EXPECT_EQ(NormalizeToken("8am"), "8am");
  EXPECT_EQ(NormalizeToken("<unk>"), "<unk>");
}

TEST(NormalizeTokenTest, Idempotent) {
  for (std::string_view t : {"I'll", "8:30", "ABC", "Ärger", "<d>", "x.Y", "12a"}) {
    const Token once = NormalizeToken(t);
    EXPECT_EQ(NormalizeToken(once), once) << t;
  }
}

TEST(VocabularyTest, SpecialIdsAreFixed) {
  const Vocabulary v;
  EXPECT_EQ(v.size(), static_cast<std::size_t>(Vocabulary::kNumSpecial));
  EXPECT_EQ(v.At("<s>"), Vocabulary::kBosId);
  EXPECT_EQ(v.At("</s>"), Vocabulary::kEosId);
  EXPECT_EQ(v.At("<unk>"), Vocabulary::kUnkId);
  EXPECT_EQ(v.At("<d>"), Vocabulary::kDigitId);
  EXPECT_EQ(v.At("<pad>"), Vocabulary::kPadId);
  EXPECT_EQ(v.At("*DELETE*"), Vocabulary::kDeleteId);
}

TEST(VocabularyTest, BuildWithMinCount) {
  const std::vector<Sentence> corpus{{"a", "a", "b"}};
  const Vocabulary v = BuildVocab(corpus, 2);
  EXPECT_TRUE(v.Contains("a"));
  EXPECT_FALSE(v.Contains("b"));
  const Vocabulary w = BuildVocab(std::vector<Sentence>{{"a"}}, 1);
  EXPECT_EQ(w.size(), static_cast<std::size_t>(Vocabulary::kNumSpecial) + 1);
}

TEST(VocabularyTest, BijectionAndSorted) {
  const Vocabulary v = BuildVocab(std::vector<Sentence>{{"c", "a", "b", "a"}});
  for (TokenId id = 0; id < static_cast<TokenId>(v.size()); ++id) {
    EXPECT_EQ(v.At(v.Word(id)), id);
  }
  EXPECT_EQ(v.Word(Vocabulary::kNumSpecial), "a");
  EXPECT_EQ(v.Word(Vocabulary::kNumSpecial + 2), "c");
}

TEST(VocabularyTest, EmptyCorpusThrows) {
  EXPECT_THROW(BuildVocab(std::vector<Sentence>{}), Error);
  EXPECT_THROW(BuildVocab(std::vector<Sentence>{{}}), Error);
}

TEST(MapOovTest, Examples) {
  const Vocabulary v(std::vector<Token>{"a"});
  EXPECT_EQ(MapOov({"a", "zz"}, v), (Sentence{"a", "<unk>"}));
  EXPECT_EQ(MapOov({"<d>"}, v), (Sentence{"<d>"}));
  EXPECT_EQ(MapOov({"x", "y"}, v), (Sentence{"<unk>", "<unk>"}));
  for (const Token &t : MapOov({"q", "a", "<s>", "r"}, v)) EXPECT_TRUE(v.Contains(t));
}

TEST(TextIoTest, CorpusRoundTrip) {
  const std::vector<Sentence> corpus{{"a", "b"}, {}, {"c"}};
  EXPECT_EQ(ParseCorpus(FormatCorpus(corpus)), corpus);
  EXPECT_EQ(SplitLines("x\r\ny\n").size(), 2u);
}

TEST(TextIoTest, PrepareText) {
  const std::vector<Sentence> in{{"Hello", ",", "World", "!"}, {"."}, {"at", "8:30"}};
  EXPECT_EQ(PrepareText(in),
            (std::vector<Sentence>{{"hello", "world"}, {"at", "<d>"}}));
}

TEST(FormatTest, FixedAndParse) {
  EXPECT_EQ(FormatFixed(1.0, 6), "1.000000");
  EXPECT_EQ(FormatFixed(-0.0000001, 3), "0.000");
  EXPECT_EQ(ParseDouble("-1.5"), -1.5);
  EXPECT_FALSE(ParseDouble("1.5x").has_value());
  EXPECT_EQ(ParseInt("42"), 42);
  EXPECT_FALSE(ParseInt("").has_value());
}

TEST(PerplexityTest, ExpOfMeanNll) {
  const PerplexityResult r = MakePerplexity(10.0, 5, 2);
  EXPECT_NEAR(r.ppl, std::exp(2.0), 1e-12);
  EXPECT_THROW(MakePerplexity(1.0, 0, 0), Error);
}

}  // namespace
}  // namespace cnlm
