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
// Command-line driver for the confusion network LM pipeline.
//
//   cnlm gen-synthetic --work-dir w
//   cnlm decode        --work-dir w --beam 50
//   cnlm build-cn      --work-dir w --nbest 10
//   cnlm train-ngram   --work-dir w --nbest 10 --source cn
//   cnlm train-rnn     --work-dir w --nbest 20 --source cn+nbest
//   cnlm ppl           --work-dir w
//   cnlm validate-cn   --input w/cn/cn.N10.txt
//
// Options may also come from a "key = value" file given with --config;
// flags win over the file, which wins over the defaults.
//
// Exit codes: 0 success, 2 usage or missing input, 3 validation failure,
// 4 numeric failure.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "cnlm/core/error.h"
#include "cnlm/core/text_io.h"
#include "cnlm/pipeline/pipeline.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;

std::string Dashed(std::string key) {
  for (char &c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

struct Command {
  CLI::App *app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> flags;
};

cnlm::PipelineConfig ResolveConfig(const Command &cmd) {
  cnlm::PipelineConfig config;
  if (!cmd.config_file.empty()) {
    for (const auto &[k, v] : cnlm::ParseConfigText(cnlm::ReadFile(cmd.config_file))) {
      cnlm::SetPipelineOption(&config, k, v);
    }
  }
  for (const auto &[key, help] : cnlm::PipelineOptionKeys()) {
    if (cmd.app->count("--" + Dashed(key)) > 0) {
      cnlm::SetPipelineOption(&config, key, cmd.flags.at(key));
    }
  }
  cnlm::ValidatePipelineConfig(config);
  return config;
}

int Run(const std::string &name, const Command &cmd, const std::string &cn_input) {
  if (name == "validate-cn") {
    cnlm::PipelineConfig config = ResolveConfig(cmd);
    const auto problems = cnlm::ValidateCnFile(cn_input, config.max_arcs);
    for (const std::string &p : problems) std::cerr << p << "\n";
    if (!problems.empty()) return kExitValidation;
    std::cout << "ok\n";
    return 0;
  }
  const cnlm::PipelineConfig config = ResolveConfig(cmd);
  if (name == "gen-synthetic") {
    cnlm::RunGenSynthetic(config);
  } else if (name == "decode") {
    const auto lists = cnlm::RunDecode(config);
    std::cerr << "decoded " << lists.size() << " sources\n";
  } else if (name == "build-cn") {
    const auto cns = cnlm::RunBuildCn(config);
    std::cerr << "built " << cns.size() << " confusion networks\n";
  } else if (name == "train-ngram") {
    const std::vector<cnlm::Discounts> discounts = cnlm::RunTrainNGram(config);
    for (std::size_t k = 0; k < discounts.size(); ++k) {
      if (discounts[k].fallback) {
        std::cerr << "warning: degenerate counts-of-counts at order " << k + 1
                  << ", using discount " << cnlm::kFallbackDiscount << "\n";
      }
    }
  } else if (name == "train-rnn") {
    cnlm::RunTrainRnn(config, [](const std::string &line) { std::cerr << line << "\n"; });
  } else if (name == "ppl") {
    for (const cnlm::PplRow &row : cnlm::RunPpl(config)) {
      std::cout << cnlm::FormatPplRow(row) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Confusion network language modeling pipeline"};
  app.require_subcommand(1);
  const std::pair<const char *, const char *> names[] = {
      {"gen-synthetic", "write a synthetic parallel corpus"},
      {"decode", "translate the training sources into N-best lists"},
      {"build-cn", "post-process N-best lists and build confusion networks"},
      {"train-ngram", "train a Kneser-Ney n-gram model"},
      {"train-rnn", "train a GRU language model"},
      {"ppl", "report test perplexities of all trained models"},
      {"validate-cn", "check every confusion network of a file"},
  };
  std::map<std::string, Command> commands;
  std::string cn_input;
  for (const auto &[name, help] : names) {
    Command &cmd = commands[name];
    cmd.app = app.add_subcommand(name, help);
    cmd.app->add_option("--config", cmd.config_file, "key = value option file")
        ->check(CLI::ExistingFile);
    for (const auto &[key, desc] : cnlm::PipelineOptionKeys()) {
      cmd.app->add_option("--" + Dashed(key), cmd.flags[key], desc);
    }
    if (std::string(name) == "validate-cn") {
      cmd.app->add_option("--input", cn_input, "confusion network file")->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  for (const auto &[name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return Run(name, cmd, cn_input);
    } catch (const cnlm::ValidationError &e) {
      std::cerr << "validation error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const cnlm::NumericError &e) {
      std::cerr << "numeric error: " << e.what() << "\n";
      return kExitNumeric;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitUsage;
}
