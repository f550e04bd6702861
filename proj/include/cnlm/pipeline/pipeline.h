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
//
// End-to-end pipeline stages shared by the command-line tool and the
// acceptance tests. Every stage reads and writes files below a work
// directory:
//
//   corpus/{train,dev,test}.{src,tgt}   parallel text
//   corpus/mt.{src,tgt}                 translation system training pairs
//   decode/nbest.txt                    raw decoder N-best lists
//   decode/graphs.txt                   beam graphs (optional)
//   cn/nbest.N<n>.txt                   post-processed top-n lists
//   cn/cn.N<n>.txt                      confusion networks
//   lm/ngram.<source>.N<n>.arpa         n-gram models
//   lm/rnn.<mode>.N<n>.bin / .log       RNN models and training logs
//   report.txt                          perplexity table

#ifndef CNLM_PIPELINE_PIPELINE_H_
#define CNLM_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/core/error.h"
#include "cnlm/core/vocabulary.h"
#include "cnlm/decoder/toy_scorer.h"
#include "cnlm/nbest/nbest_list.h"
#include "cnlm/ngram/kneser_ney.h"
#include "cnlm/rnn/trainer.h"

namespace cnlm {

// Bad option values or missing inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct PipelineConfig {
  std::filesystem::path work_dir = "work";
  std::uint64_t seed = 1;

  // gen-synthetic
  int train_size = 2000;
  int dev_size = 200;
  int test_size = 200;
  int mt_size = 2000;

  // decode
  std::string decode_mode = "beam";  // beam | dbs
  int beam = 50;
  int groups = 1;
  double diversity = 0.5;
  int max_len = 40;
  double lexicon_weight = 0.5;
  bool write_graphs = false;

  // build-cn and LM training
  int nbest = 10;
  int max_arcs = 5;
  double posterior_scale = 1.0;
  double min_count_prob = 1e-6;
  int max_skip = -1;
  int order = 3;
  std::string source = "nbest";  // nbest | cn | cn+nbest

  TrainConfig rnn;

  std::filesystem::path Path(std::string_view relative) const {
    return work_dir / std::filesystem::path(relative);
  }
};

// Sets one option from its textual value. Keys use underscores; dashes are
// accepted as well. Throws UsageError for unknown keys or bad values.
void SetPipelineOption(PipelineConfig *config, std::string_view key,
                       std::string_view value);

// Every key understood by SetPipelineOption, with a short description.
const std::vector<std::pair<std::string, std::string>> &PipelineOptionKeys();

// Parses "key = value" lines; '#' starts a comment. Throws ParseError.
std::map<std::string, std::string> ParseConfigText(std::string_view text);

// Range checks shared by all stages; throws UsageError.
void ValidatePipelineConfig(const PipelineConfig &config);

std::vector<SentencePair> ReadParallel(const PipelineConfig &config,
                                       std::string_view split);

// LM vocabulary: normalized target side of the training corpus.
Vocabulary LmVocabulary(const PipelineConfig &config);

// Normalized, OOV-mapped target side of `split`.
std::vector<Sentence> LmText(const PipelineConfig &config, std::string_view split,
                             const Vocabulary &vocab);

std::filesystem::path NBestPath(const PipelineConfig &config, int n);
std::filesystem::path CnPath(const PipelineConfig &config, int n);
std::filesystem::path NGramPath(const PipelineConfig &config, int n,
                                std::string_view source);
std::filesystem::path RnnPath(const PipelineConfig &config, int n,
                              std::string_view mode);

void RunGenSynthetic(const PipelineConfig &config);
// Trains the toy scorer on the mt split and translates the train sources.
// Returns the raw N-best lists as written.
std::vector<NBestList> RunDecode(const PipelineConfig &config);
// Uses config.nbest; throws ValidationError naming the first invalid CN.
std::vector<ConfusionNetwork> RunBuildCn(const PipelineConfig &config);
// Uses config.nbest and config.source (nbest | cn).
// Returns the discounts used per order, lowest first.
std::vector<Discounts> RunTrainNGram(const PipelineConfig &config);
// Uses config.nbest and config.source as training mode. Each epoch record
// is passed to `log` when set.
void RunTrainRnn(const PipelineConfig &config,
                 const std::function<void(const std::string &)> &log = {});

struct PplRow {
  std::string model;  // e.g. "ngram-cn", "rnn-cn+nbest"
  int n = 0;
  double ppl = 0.0;
};
std::string FormatPplRow(const PplRow &row);

// Evaluates every model found under lm/ on the test text, in a fixed order,
// writes report.txt and returns its rows.
std::vector<PplRow> RunPpl(const PipelineConfig &config);

// Validates every network in a CN file; returns one message per problem.
std::vector<std::string> ValidateCnFile(const std::filesystem::path &path,
                                        int max_arcs);

}  // namespace cnlm

#endif  // CNLM_PIPELINE_PIPELINE_H_
