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

#include "cnlm/pipeline/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "cnlm/cnbuild/mesh.h"
#include "cnlm/core/format.h"
#include "cnlm/core/text_io.h"
#include "cnlm/decoder/beam_search.h"
#include "cnlm/ngram/counts.h"
#include "cnlm/ngram/kneser_ney.h"
#include "cnlm/ngram/ngram_model.h"
#include "cnlm/nbest/postprocess.h"
#include "cnlm/pipeline/synthetic.h"
#include "cnlm/rnn/model_io.h"

namespace cnlm {
namespace fs = std::filesystem;
namespace {

int IntValue(std::string_view key, std::string_view value) {
  const auto v = ParseInt(value);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    throw UsageError("option " + std::string(key) + ": expected an integer, got '" +
                     std::string(value) + "'");
  }
  return static_cast<int>(*v);
}

double DoubleValue(std::string_view key, std::string_view value) {
  const auto v = ParseDouble(value);
  if (!v || !std::isfinite(*v)) {
    throw UsageError("option " + std::string(key) + ": expected a number, got '" +
                     std::string(value) + "'");
  }
  return *v;
}

bool BoolValue(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("option " + std::string(key) + ": expected true or false");
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void RequireFile(const fs::path &path) {
  if (!fs::is_regular_file(path)) {
    throw UsageError("missing input file " + path.string());
  }
}

// Seed of one pipeline stage, derived from the root seed.
std::uint64_t StageSeed(std::uint64_t root, std::string_view stage) {
  std::uint64_t h = 1469598103934665603ull ^ root;
  for (char c : stage) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

Sentence SourceForDecoding(const Sentence &source) { return StripPunctuation(source); }

std::string SourceId(int index) {
  std::string digits = std::to_string(index + 1);
  return "train-" + std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits;
}

std::vector<Sentence> HypothesisText(const std::vector<NBestList> &lists,
                                     const Vocabulary &vocab) {
  std::vector<Sentence> raw;
  for (const NBestList &l : lists) {
    for (const Hypothesis &h : l.hypotheses) raw.push_back(h.tokens);
  }
  std::vector<Sentence> out = PrepareText(raw);
  for (Sentence &s : out) s = MapOov(s, vocab);
  return out;
}

std::vector<ConfusionNetwork> ReadCns(const fs::path &path) {
  RequireFile(path);
  return ParseConfusionNetworks(ReadFile(path));
}

std::vector<NBestList> ReadNBest(const fs::path &path) {
  RequireFile(path);
  return ParseNBestLists(ReadFile(path));
}

}  // namespace

const std::vector<std::pair<std::string, std::string>> &PipelineOptionKeys() {
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"work_dir", "directory holding all pipeline files"},
      {"seed", "root random seed"},
      {"train_size", "synthetic training pairs"},
      {"dev_size", "synthetic dev pairs"},
      {"test_size", "synthetic test pairs"},
      {"mt_size", "synthetic pairs the translation system is trained on"},
      {"decode_mode", "beam or dbs"},
      {"beam", "beam width B"},
      {"groups", "diverse beam search groups G"},
      {"diversity", "diversity strength lambda"},
      {"max_len", "maximum hypothesis length"},
      {"lexicon_weight", "exponent of the toy translation lexicon"},
      {"write_graphs", "also write beam graphs"},
      {"nbest", "hypotheses per source N"},
      {"max_arcs", "arcs kept per bin (0 = all)"},
      {"posterior_scale", "scale applied to log-likelihoods"},
      {"min_count_prob", "smallest n-gram occurrence probability kept"},
      {"max_skip", "consecutive *DELETE* arcs an n-gram may skip (-1 = any)"},
      {"order", "n-gram order"},
      {"source", "training data: nbest, cn or cn+nbest"},
      {"hidden", "RNN hidden and embedding size"},
      {"batch_size", "RNN batch size"},
      {"learning_rate", "initial Adam learning rate"},
      {"lr_factor", "learning rate decay factor"},
      {"lr_patience", "epochs without improvement before decay"},
      {"early_stop_patience", "epochs without improvement before stopping"},
      {"max_epochs", "upper bound on RNN epochs"},
      {"clip_norm", "gradient norm clipping threshold (0 = off)"},
      {"init_scale", "uniform initialization range"},
      {"pooling", "weighted-mean, mean or max"},
  };
  return keys;
}

void SetPipelineOption(PipelineConfig *c, std::string_view raw_key,
                       std::string_view value) {
  std::string key(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v(value);
  if (key == "work_dir") {
    if (v.empty()) throw UsageError("option work_dir: empty path");
    c->work_dir = v;
  } else if (key == "seed") {
    const auto s = ParseInt(v);
    if (!s || *s < 0) throw UsageError("option seed: expected a non-negative integer");
    c->seed = static_cast<std::uint64_t>(*s);
  } else if (key == "train_size") {
    c->train_size = IntValue(key, v);
  } else if (key == "dev_size") {
    c->dev_size = IntValue(key, v);
  } else if (key == "test_size") {
    c->test_size = IntValue(key, v);
  } else if (key == "mt_size") {
    c->mt_size = IntValue(key, v);
  } else if (key == "decode_mode") {
    c->decode_mode = v;
  } else if (key == "beam") {
    c->beam = IntValue(key, v);
  } else if (key == "groups") {
    c->groups = IntValue(key, v);
  } else if (key == "diversity") {
    c->diversity = DoubleValue(key, v);
  } else if (key == "max_len") {
    c->max_len = IntValue(key, v);
  } else if (key == "lexicon_weight") {
    c->lexicon_weight = DoubleValue(key, v);
  } else if (key == "write_graphs") {
    c->write_graphs = BoolValue(key, v);
  } else if (key == "nbest") {
    c->nbest = IntValue(key, v);
  } else if (key == "max_arcs") {
    c->max_arcs = IntValue(key, v);
  } else if (key == "posterior_scale") {
    c->posterior_scale = DoubleValue(key, v);
  } else if (key == "min_count_prob") {
    c->min_count_prob = DoubleValue(key, v);
  } else if (key == "max_skip") {
    c->max_skip = IntValue(key, v);
  } else if (key == "order") {
    c->order = IntValue(key, v);
  } else if (key == "source") {
    c->source = v;
  } else if (key == "hidden") {
    c->rnn.hidden = IntValue(key, v);
  } else if (key == "batch_size") {
    c->rnn.batch_size = IntValue(key, v);
  } else if (key == "learning_rate") {
    c->rnn.learning_rate = DoubleValue(key, v);
  } else if (key == "lr_factor") {
    c->rnn.lr_factor = DoubleValue(key, v);
  } else if (key == "lr_patience") {
    c->rnn.lr_patience = IntValue(key, v);
  } else if (key == "early_stop_patience") {
    c->rnn.early_stop_patience = IntValue(key, v);
  } else if (key == "max_epochs") {
    c->rnn.max_epochs = IntValue(key, v);
  } else if (key == "clip_norm") {
    c->rnn.clip_norm = DoubleValue(key, v);
  } else if (key == "init_scale") {
    c->rnn.init_scale = DoubleValue(key, v);
  } else if (key == "pooling") {
    try {
      c->rnn.pooling = ParsePooling(v);
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("unknown option '" + std::string(raw_key) + "'");
  }
}

std::map<std::string, std::string> ParseConfigText(std::string_view text) {
  std::map<std::string, std::string> out;
  const std::vector<std::string_view> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", i + 1);
    std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", i + 1);
    std::replace(key.begin(), key.end(), '-', '_');
    out[key] = value;
  }
  return out;
}

void ValidatePipelineConfig(const PipelineConfig &c) {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw UsageError("invalid option: " + what);
  };
  require(c.train_size >= 1 && c.dev_size >= 1 && c.test_size >= 1 &&
              c.mt_size >= 1,
          "corpus sizes must be >= 1");
  require(c.decode_mode == "beam" || c.decode_mode == "dbs",
          "decode_mode must be beam or dbs");
  require(c.beam >= 1, "beam must be >= 1");
  require(c.groups >= 1 && c.beam % c.groups == 0, "groups must divide beam");
  require(c.diversity >= 0.0, "diversity must be >= 0");
  require(c.max_len >= 1, "max_len must be >= 1");
  require(c.lexicon_weight >= 0.0,
          "lexicon_weight must be >= 0");
  require(c.nbest >= 1 && c.nbest <= c.beam, "nbest must lie in [1, beam]");
  require(c.max_arcs >= 0, "max_arcs must be >= 0");
  require(c.posterior_scale > 0.0, "posterior_scale must be > 0");
  require(c.min_count_prob > 0.0 && c.min_count_prob < 1.0,
          "min_count_prob must lie in (0, 1)");
  require(c.max_skip >= -1, "max_skip must be >= -1");
  require(c.order >= 1 && c.order <= 9, "order must lie in [1, 9]");
  require(c.source == "nbest" || c.source == "cn" || c.source == "cn+nbest",
          "source must be nbest, cn or cn+nbest");
  try {
    c.rnn.Validate();
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
}

std::vector<SentencePair> ReadParallel(const PipelineConfig &config,
                                       std::string_view split) {
  const fs::path src = config.Path("corpus/" + std::string(split) + ".src");
  const fs::path tgt = config.Path("corpus/" + std::string(split) + ".tgt");
  RequireFile(src);
  RequireFile(tgt);
  const std::vector<Sentence> s = ReadCorpus(src);
  const std::vector<Sentence> t = ReadCorpus(tgt);
  if (s.size() != t.size()) {
    throw ParseError(src.string() + " and " + tgt.string() + " differ in length", 0);
  }
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s[i], t[i]});
  return out;
}

Vocabulary LmVocabulary(const PipelineConfig &config) {
  std::vector<Sentence> targets;
  for (const SentencePair &p : ReadParallel(config, "train")) targets.push_back(p.target);
  return BuildVocab(PrepareText(targets));
}

std::vector<Sentence> LmText(const PipelineConfig &config, std::string_view split,
                             const Vocabulary &vocab) {
  std::vector<Sentence> targets;
  for (const SentencePair &p : ReadParallel(config, split)) targets.push_back(p.target);
  std::vector<Sentence> out = PrepareText(targets);
  for (Sentence &s : out) s = MapOov(s, vocab);
  return out;
}

fs::path NBestPath(const PipelineConfig &config, int n) {
  return config.Path("cn/nbest.N" + std::to_string(n) + ".txt");
}
fs::path CnPath(const PipelineConfig &config, int n) {
  return config.Path("cn/cn.N" + std::to_string(n) + ".txt");
}
fs::path NGramPath(const PipelineConfig &config, int n, std::string_view source) {
  return config.Path("lm/ngram." + std::string(source) + ".N" + std::to_string(n) +
                     ".arpa");
}
fs::path RnnPath(const PipelineConfig &config, int n, std::string_view mode) {
  return config.Path("lm/rnn." + std::string(mode) + ".N" + std::to_string(n) + ".bin");
}

void RunGenSynthetic(const PipelineConfig &config) {
  SyntheticOptions options;
  options.train_size = config.train_size;
  options.dev_size = config.dev_size;
  options.test_size = config.test_size;
  options.mt_size = config.mt_size;
  options.seed = StageSeed(config.seed, "gen-synthetic");
  const SyntheticCorpus corpus = GenerateSynthetic(options);
  fs::create_directories(config.Path("corpus"));
  const std::pair<const char *, const std::vector<SentencePair> *> splits[] = {
      {"train", &corpus.train}, {"dev", &corpus.dev}, {"test", &corpus.test},
      {"mt", &corpus.mt}};
  for (const auto &[name, pairs] : splits) {
    std::vector<Sentence> src, tgt;
    for (const SentencePair &p : *pairs) {
      src.push_back(p.source);
      tgt.push_back(p.target);
    }
    WriteFile(config.Path(std::string("corpus/") + name + ".src"), FormatCorpus(src));
    WriteFile(config.Path(std::string("corpus/") + name + ".tgt"), FormatCorpus(tgt));
  }
}

std::vector<NBestList> RunDecode(const PipelineConfig &config) {
  ValidatePipelineConfig(config);
  std::vector<SentencePair> mt = ReadParallel(config, "mt");
  for (SentencePair &p : mt) p.source = SourceForDecoding(p.source);
  ToyScorerOptions scorer_options;
  scorer_options.lexicon_weight = config.lexicon_weight;
  const ToyScorer scorer = TrainToyScorer(mt, scorer_options);

  std::vector<SentencePair> train = ReadParallel(config, "train");
  for (SentencePair &p : train) p.source = SourceForDecoding(p.source);

  BeamSearchOptions options;
  options.beam = config.beam;
  options.groups = config.decode_mode == "dbs" ? config.groups : 1;
  options.diversity = config.diversity;
  options.max_len = config.max_len;

  std::vector<NBestList> lists;
  std::string graphs;
  for (std::size_t i = 0; i < train.size(); ++i) {
    DecodeResult r = DiverseBeamSearch(scorer, train[i].source, options);
    r.nbest.source_id = SourceId(static_cast<int>(i));
    if (config.write_graphs) graphs += r.graph.Format(r.nbest.source_id, scorer.vocab());
    lists.push_back(std::move(r.nbest));
  }
  fs::create_directories(config.Path("decode"));
  WriteFile(config.Path("decode/nbest.txt"), FormatNBestLists(lists));
  if (config.write_graphs) WriteFile(config.Path("decode/graphs.txt"), graphs);
  return lists;
}

std::vector<ConfusionNetwork> RunBuildCn(const PipelineConfig &config) {
  ValidatePipelineConfig(config);
  std::vector<NBestList> raw = ReadNBest(config.Path("decode/nbest.txt"));
  const std::vector<SentencePair> train = ReadParallel(config, "train");
  if (raw.size() != train.size()) {
    throw ParseError("decoder output does not match the training corpus", 0);
  }
  const Vocabulary vocab = LmVocabulary(config);
  CnBuildOptions options;
  options.max_arcs = config.max_arcs;
  options.posterior_scale = config.posterior_scale;
  ValidationOptions checks;
  checks.max_arcs = config.max_arcs;

  std::vector<NBestList> post;
  std::vector<ConfusionNetwork> cns;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i].source = SourceForDecoding(train[i].source);
    post.push_back(PostprocessNBest(TruncateNBest(raw[i], static_cast<std::size_t>(config.nbest))));
    ConfusionNetwork cn = BuildConfusionNetwork(post.back(), options, &vocab);
    const std::vector<std::string> problems = CheckConfusionNetwork(cn, checks);
    if (!problems.empty()) {
      throw ValidationError("invalid confusion network for " + cn.source_id + ": " +
                            problems.front());
    }
    cns.push_back(std::move(cn));
  }
  fs::create_directories(config.Path("cn"));
  WriteFile(NBestPath(config, config.nbest), FormatNBestLists(post));
  WriteFile(CnPath(config, config.nbest), SerializeConfusionNetworks(cns));
  return cns;
}

std::vector<Discounts> RunTrainNGram(const PipelineConfig &config) {
  ValidatePipelineConfig(config);
  const Vocabulary vocab = LmVocabulary(config);
  FractionalCounts counts(config.order);
  if (config.source == "nbest") {
    const std::vector<Sentence> text =
        HypothesisText(ReadNBest(NBestPath(config, config.nbest)), vocab);
    counts = CountText(text, vocab, config.order);
  } else if (config.source == "cn") {
    CnCountOptions options;
    options.min_prob = config.min_count_prob;
    options.max_skip = config.max_skip;
    for (const ConfusionNetwork &cn : ReadCns(CnPath(config, config.nbest))) {
      counts.Merge(CountConfusionNetwork(cn, vocab, config.order, options));
    }
  } else {
    throw UsageError("n-gram models train on nbest or cn data");
  }
  std::vector<Discounts> discounts;
  const NGramModel model = TrainKneserNey(counts, vocab, &discounts);
  fs::create_directories(config.Path("lm"));
  WriteFile(NGramPath(config, config.nbest, config.source), WriteArpa(model));
  return discounts;
}

void RunTrainRnn(const PipelineConfig &config,
                 const std::function<void(const std::string &)> &log) {
  ValidatePipelineConfig(config);
  const Vocabulary vocab = LmVocabulary(config);
  TrainConfig train = config.rnn;
  train.mode = ParseTrainMode(config.source);
  train.seed = StageSeed(config.seed, "train-rnn." + config.source + ".N" +
                                          std::to_string(config.nbest));
  TrainData data;
  if (train.mode != TrainMode::kCn) {
    for (const Sentence &s :
         HypothesisText(ReadNBest(NBestPath(config, config.nbest)), vocab)) {
      data.nbest.push_back(SequenceFromText(s, vocab));
    }
  }
  if (train.mode != TrainMode::kNBest) {
    for (const ConfusionNetwork &cn : ReadCns(CnPath(config, config.nbest))) {
      data.cn.push_back(SequenceFromConfusionNetwork(cn, vocab));
    }
  }
  const std::vector<Sentence> dev = LmText(config, "dev", vocab);
  std::string log_text;
  const TrainResult result = TrainRnn(train, vocab, data, dev, [&](const EpochRecord &r) {
    const std::string line = FormatEpochRecord(r);
    log_text += line + "\n";
    if (log) log(line);
  });
  fs::create_directories(config.Path("lm"));
  const fs::path path = RnnPath(config, config.nbest, config.source);
  WriteRnnModel(path, result.model);
  fs::path log_path = path;
  log_path.replace_extension(".log");
  WriteFile(log_path, log_text);
}

std::string FormatPplRow(const PplRow &row) {
  return "model=" + row.model + " N=" + std::to_string(row.n) +
         " ppl=" + FormatFixed(row.ppl, 2);
}

std::vector<PplRow> RunPpl(const PipelineConfig &config) {
  const fs::path dir = config.Path("lm");
  if (!fs::is_directory(dir)) throw UsageError("no models under " + dir.string());
  struct Found {
    std::string kind, source;
    int n;
    fs::path path;
  };
  std::vector<Found> models;
  for (const fs::directory_entry &e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const std::vector<std::string_view> parts = SplitOn(name, '.');
    // kind . source [+nbest is part of the source] . N<n> . ext
    if (parts.size() != 4 || parts[2].size() < 2 || parts[2][0] != 'N') continue;
    const bool arpa = parts[0] == "ngram" && parts[3] == "arpa";
    const bool bin = parts[0] == "rnn" && parts[3] == "bin";
    if (!arpa && !bin) continue;
    const auto n = ParseInt(parts[2].substr(1));
    if (!n) continue;
    models.push_back({std::string(parts[0]), std::string(parts[1]), static_cast<int>(*n),
                      e.path()});
  }
  if (models.empty()) throw UsageError("no models under " + dir.string());
  std::sort(models.begin(), models.end(), [](const Found &a, const Found &b) {
    return std::tie(a.kind, a.source, a.n) < std::tie(b.kind, b.source, b.n);
  });

  std::vector<Sentence> test;
  for (const SentencePair &p : ReadParallel(config, "test")) test.push_back(p.target);
  test = PrepareText(test);

  std::vector<PplRow> rows;
  std::string report;
  for (const Found &m : models) {
    PplRow row{m.kind + "-" + m.source, m.n, 0.0};
    if (m.kind == "ngram") {
      const NGramModel model = ReadArpa(ReadFile(m.path));
      std::vector<Sentence> mapped;
      for (const Sentence &s : test) mapped.push_back(MapOov(s, model.vocab()));
      row.ppl = NGramPerplexity(model, mapped).ppl;
    } else {
      const RnnModel model = ReadRnnModel(m.path);
      std::vector<Sentence> mapped;
      for (const Sentence &s : test) mapped.push_back(MapOov(s, model.vocab));
      row.ppl = RnnPerplexity(model, mapped).ppl;
    }
    report += FormatPplRow(row) + "\n";
    rows.push_back(row);
  }
  WriteFile(config.Path("report.txt"), report);
  return rows;
}

std::vector<std::string> ValidateCnFile(const fs::path &path, int max_arcs) {
  ValidationOptions options;
  options.max_arcs = max_arcs;
  // Scores are stored with six decimals.
  options.sum_tolerance = 1e-5;
  std::vector<std::string> problems;
  for (const ConfusionNetwork &cn : ReadCns(path)) {
    for (const std::string &p : CheckConfusionNetwork(cn, options)) {
      problems.push_back(cn.source_id + ": " + p);
    }
  }
  return problems;
}

}  // namespace cnlm
