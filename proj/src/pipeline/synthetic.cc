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

#include "cnlm/pipeline/synthetic.h"

#include <cctype>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "cnlm/core/error.h"

namespace cnlm {
namespace {

struct Variant {
  const char *en;
  double weight;
};

struct Frame {
  const char *de;
  std::vector<Variant> en;
};

struct SlotValue {
  const char *de;
  const char *en;
  bool held_out = false;
};

// Paraphrase frequencies: the first rendering dominates.
constexpr double kW[] = {5, 3, 2, 1};

// The translation system's training data only knows this many renderings
// per frame.
constexpr std::size_t kMtRenderings = 2;

const std::vector<Frame> &Frames() {
  static const std::vector<Frame> frames{
      // pizza
      {"hallo , ich moechte eine pizza bestellen .",
       {{"Hi , I would like to order a pizza .", kW[0]},
        {"Hello , I want to order a pizza .", kW[1]},
        {"Hi , can I order a pizza ?", kW[2]},
        {"Hey , I'd like to get a pizza .", kW[3]}}},
      {"eine {size} pizza mit {topping} bitte .",
       {{"A {size} pizza with {topping} please .", kW[0]},
        {"I'll have a {size} {topping} pizza .", kW[1]},
        {"Can I get a {size} pizza with {topping} ?", kW[2]},
        {"One {size} {topping} pizza , please .", kW[3]}}},
      {"wie lange dauert die lieferung ?",
       {{"How long will the delivery take ?", kW[0]},
        {"How long does delivery take ?", kW[1]},
        {"When will it be delivered ?", kW[2]},
        {"How long until it arrives ?", kW[3]}}},
      {"die lieferung dauert etwa {minutes} minuten .",
       {{"The delivery will take about {minutes} minutes .", kW[0]},
        {"It will take around {minutes} minutes .", kW[1]},
        {"Delivery takes about {minutes} minutes .", kW[2]},
        {"It should arrive in about {minutes} minutes .", kW[3]}}},
      {"das kostet {price} dollar .",
       {{"That will be $ {price} .", kW[0]},
        {"The total is $ {price} .", kW[1]},
        {"It costs {price} dollars .", kW[2]},
        {"Your total comes to $ {price} .", kW[3]}}},
      // coffee
      {"ich haette gerne einen {csize} {coffee} .",
       {{"I would like a {csize} {coffee} .", kW[0]},
        {"Can I get a {csize} {coffee} ?", kW[1]},
        {"I'll have a {csize} {coffee} , please .", kW[2]},
        {"A {csize} {coffee} for me , please .", kW[3]}}},
      {"mit {milk} milch bitte .",
       {{"With {milk} milk , please .", kW[0]},
        {"Make it with {milk} milk .", kW[1]},
        {"Could you use {milk} milk ?", kW[2]},
        {"I'd like {milk} milk in it .", kW[3]}}},
      {"moechten sie noch etwas ?",
       {{"Would you like anything else ?", kW[0]},
        {"Do you want anything else ?", kW[1]},
        {"Anything else ?", kW[2]},
        {"Can I get you anything else ?", kW[3]}}},
      // cinema
      {"ich brauche {num} karten fuer {movie} .",
       {{"I need {num} tickets for {movie} .", kW[0]},
        {"I would like {num} tickets for {movie} .", kW[1]},
        {"Can I get {num} tickets to {movie} ?", kW[2]},
        {"I want to buy {num} tickets for {movie} .", kW[3]}}},
      {"die vorstellung beginnt um {time} uhr .",
       {{"The show starts at {time} pm .", kW[0]},
        {"The movie begins at {time} pm .", kW[1]},
        {"The showing is at {time} pm .", kW[2]},
        {"It starts at {time} p.m.", kW[3]}}},
      {"gibt es noch plaetze in der mitte ?",
       {{"Are there any seats left in the middle ?", kW[0]},
        {"Do you have seats in the middle ?", kW[1]},
        {"Are any middle seats available ?", kW[2]},
        {"Can we sit in the middle ?", kW[3]}}},
      // restaurant
      {"ich moechte einen tisch fuer {num} personen reservieren .",
       {{"I would like to reserve a table for {num} people .", kW[0]},
        {"I want to book a table for {num} .", kW[1]},
        {"Can I reserve a table for {num} people ?", kW[2]},
        {"I'd like a table for {num} , please .", kW[3]}}},
      {"am {day} um {time} uhr .",
       {{"On {day} at {time} pm .", kW[0]},
        {"For {day} at {time} pm .", kW[1]},
        {"This {day} at {time} .", kW[2]},
        {"{day} at {time} , please .", kW[3]}}},
      {"im restaurant {restaurant} bitte .",
       {{"At {restaurant} , please .", kW[0]},
        {"The restaurant is {restaurant} .", kW[1]},
        {"I'd like to go to {restaurant} .", kW[2]},
        {"At the {restaurant} restaurant .", kW[3]}}},
      {"ihre reservierung ist bestaetigt .",
       {{"Your reservation is confirmed .", kW[0]},
        {"Your table is booked .", kW[1]},
        {"You are all set .", kW[2]},
        {"The reservation has been confirmed .", kW[3]}}},
      // car repair
      {"mein auto macht ein seltsames geraeusch .",
       {{"My car is making a strange noise .", kW[0]},
        {"My car makes a weird noise .", kW[1]},
        {"There is a strange noise coming from my car .", kW[2]},
        {"My car has been making an odd sound .", kW[3]}}},
      {"die {part} funktionieren nicht richtig .",
       {{"The {part} are not working properly .", kW[0]},
        {"The {part} don't work right .", kW[1]},
        {"Something is wrong with the {part} .", kW[2]},
        {"I think the {part} are broken .", kW[3]}}},
      {"koennen sie mir einen termin am {day} geben ?",
       {{"Can you give me an appointment on {day} ?", kW[0]},
        {"Do you have an appointment on {day} ?", kW[1]},
        {"Could I come in on {day} ?", kW[2]},
        {"Is {day} available for an appointment ?", kW[3]}}},
      {"die reparatur kostet {price} dollar .",
       {{"The repair will cost $ {price} .", kW[0]},
        {"The repair costs {price} dollars .", kW[1]},
        {"It will be $ {price} for the repair .", kW[2]},
        {"Repairs come to $ {price} .", kW[3]}}},
      // rides
      {"ich brauche eine fahrt zum {place} .",
       {{"I need a ride to the {place} .", kW[0]},
        {"Can I get a ride to the {place} ?", kW[1]},
        {"I need to get to the {place} .", kW[2]},
        {"Please take me to the {place} .", kW[3]}}},
      {"holen sie mich um {time} uhr ab .",
       {{"Pick me up at {time} pm .", kW[0]},
        {"Please pick me up at {time} .", kW[1]},
        {"Can you pick me up at {time} am ?", kW[2]},
        {"I need a pickup at {time} .", kW[3]}}},
      {"der fahrer kommt in {minutes} minuten .",
       {{"The driver will arrive in {minutes} minutes .", kW[0]},
        {"Your driver is {minutes} minutes away .", kW[1]},
        {"The driver will be there in {minutes} minutes .", kW[2]},
        {"Your ride arrives in {minutes} minutes .", kW[3]}}},
      // shared
      {"danke schoen !",
       {{"Thank you !", kW[0]},
        {"Thanks a lot !", kW[1]},
        {"Thanks !", kW[2]},
        {"Thank you very much .", kW[3]}}},
      {"ja , das ist richtig .",
       {{"Yes , that is correct .", kW[0]},
        {"Yes , that's right .", kW[1]},
        {"Correct .", kW[2]},
        {"Yes , exactly .", kW[3]}}},
      {"nein , das ist alles .",
       {{"No , that is all .", kW[0]},
        {"No , that's everything .", kW[1]},
        {"No thanks , that's it .", kW[2]},
        {"That's all , thanks .", kW[3]}}},
      {"auf wiedersehen .",
       {{"Goodbye .", kW[0]},
        {"Bye !", kW[1]},
        {"Have a nice day !", kW[2]},
        {"See you later .", kW[3]}}},
  };
  return frames;
}

const std::map<std::string, std::vector<SlotValue>> &Slots() {
  static const std::map<std::string, std::vector<SlotValue>> slots{
      {"size",
       {{"kleine", "small"}, {"mittlere", "medium"}, {"grosse", "large"},
        {"riesige", "extra-large"}, {"familien", "family-size", true}}},
      {"topping",
       {{"pilzen", "mushrooms"}, {"salami", "pepperoni"}, {"schinken", "ham"},
        {"oliven", "olives"}, {"zwiebeln", "onions"}, {"paprika", "peppers"},
        {"ananas", "pineapple"}, {"spinat", "spinach"},
        {"sardellen", "anchovies", true}, {"artischocken", "artichokes", true}}},
      {"csize", {{"kleinen", "small"}, {"mittleren", "medium"}, {"grossen", "large"}}},
      {"coffee",
       {{"kaffee", "coffee"}, {"cappuccino", "cappuccino"}, {"latte", "latte"},
        {"espresso", "espresso"}, {"tee", "tea"}, {"mokka", "mocha"},
        {"macchiato", "macchiato", true}}},
      {"milk",
       {{"hafer", "oat"}, {"soja", "soy"}, {"mandel", "almond"},
        {"fettarmer", "skim"}, {"voller", "whole"}, {"kokos", "coconut", true}}},
      {"num",
       {{"zwei", "two"}, {"drei", "three"}, {"vier", "four"}, {"fuenf", "five"},
        {"sechs", "six"}}},
      {"movie",
       {{"dune", "Dune"}, {"avatar", "Avatar"}, {"frozen", "Frozen"},
        {"inception", "Inception"}, {"barbie", "Barbie"},
        {"oppenheimer", "Oppenheimer"}, {"tenet", "Tenet", true}}},
      {"day",
       {{"montag", "Monday"}, {"dienstag", "Tuesday"}, {"mittwoch", "Wednesday"},
        {"donnerstag", "Thursday"}, {"freitag", "Friday"}, {"samstag", "Saturday"},
        {"sonntag", "Sunday"}}},
      {"restaurant",
       {{"luigi's", "Luigi's"}, {"sakura", "Sakura"}, {"bistro", "Bistro"},
        {"olivia", "Olivia"}, {"zorba's", "Zorba's", true}}},
      {"part",
       {{"bremsen", "brakes"}, {"scheinwerfer", "headlights"},
        {"scheibenwischer", "wipers"}, {"blinker", "blinkers"}, {"reifen", "tires"},
        {"stossdaempfer", "shocks", true}}},
      {"place",
       {{"flughafen", "airport"}, {"bahnhof", "station"}, {"hotel", "hotel"},
        {"museum", "museum"}, {"stadion", "stadium"}, {"hafen", "harbor"},
        {"zoo", "zoo", true}}},
  };
  return slots;
}

constexpr double kHeldOutRate = 0.15;

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  // `renderings` > 0 restricts the English side to the first renderings of
  // each frame.
  SentencePair Next(bool allow_held_out, std::size_t renderings = 0) {
    const std::vector<Frame> &frames = Frames();
    const Frame &frame = frames[Uniform(frames.size())];
    std::vector<double> weights;
    for (const Variant &v : frame.en) weights.push_back(v.weight);
    if (renderings > 0 && renderings < weights.size()) weights.resize(renderings);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const Variant &variant = frame.en[pick(rng_)];

    // One value per slot name, shared by both sides.
    std::map<std::string, std::pair<std::string, std::string>> fill;
    SentencePair pair;
    pair.source = Expand(frame.de, true, allow_held_out, &fill);
    pair.target = Expand(variant.en, false, allow_held_out, &fill);
    if (!pair.source.empty() && !pair.source[0].empty()) {
      pair.source[0][0] = static_cast<char>(std::toupper(
          static_cast<unsigned char>(pair.source[0][0])));
    }
    return pair;
  }

 private:
  std::size_t Uniform(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  std::pair<std::string, std::string> Value(const std::string &slot,
                                            bool allow_held_out) {
    if (slot == "time") {
      static constexpr const char *kMinutes[] = {"00", "15", "30", "45"};
      const std::string t = std::to_string(1 + Uniform(12)) + ":" + kMinutes[Uniform(4)];
      return {t, t};
    }
    if (slot == "minutes") {
      static constexpr int kValues[] = {10, 15, 20, 25, 30, 40, 45};
      const std::string m = std::to_string(kValues[Uniform(7)]);
      return {m, m};
    }
    if (slot == "price") {
      static constexpr const char *kCents[] = {"00", "50", "99", "25"};
      const std::string p = std::to_string(4 + Uniform(37)) + "," + kCents[Uniform(4)];
      return {p, p};
    }
    const auto it = Slots().find(slot);
    if (it == Slots().end()) throw Error("unknown template slot '" + slot + "'");
    std::vector<const SlotValue *> seen, held;
    for (const SlotValue &v : it->second) (v.held_out ? held : seen).push_back(&v);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool use_held = allow_held_out && !held.empty() && u(rng_) < kHeldOutRate;
    const std::vector<const SlotValue *> &pool = use_held ? held : seen;
    const SlotValue *v = pool[Uniform(pool.size())];
    return {v->de, v->en};
  }

  Sentence Expand(std::string_view pattern, bool german, bool allow_held_out,
                  std::map<std::string, std::pair<std::string, std::string>> *fill) {
    Sentence out;
    for (const Token &word : SplitTokens(pattern)) {
      if (word.size() > 2 && word.front() == '{' && word.back() == '}') {
        const std::string slot = word.substr(1, word.size() - 2);
        auto it = fill->find(slot);
        if (it == fill->end()) it = fill->emplace(slot, Value(slot, allow_held_out)).first;
        for (const Token &t : SplitTokens(german ? it->second.first : it->second.second)) {
          out.push_back(t);
        }
      } else {
        out.push_back(word);
      }
    }
    return out;
  }

  std::mt19937_64 rng_;
};

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticOptions &options) {
  if (options.train_size < 1 || options.dev_size < 1 || options.test_size < 1 ||
      options.mt_size < 1) {
    throw Error("corpus sizes must be >= 1");
  }
  // Independent streams so that changing one size leaves the others alone.
  SyntheticCorpus corpus;
  const std::uint64_t base = options.seed * 0x9E3779B97F4A7C15ull;
  Generator train(base + 1), dev(base + 2), test(base + 3), mt(base + 4);
  for (int i = 0; i < options.train_size; ++i) corpus.train.push_back(train.Next(false));
  for (int i = 0; i < options.mt_size; ++i) {
    corpus.mt.push_back(mt.Next(false, kMtRenderings));
  }
  for (int i = 0; i < options.dev_size; ++i) corpus.dev.push_back(dev.Next(true));
  for (int i = 0; i < options.test_size; ++i) corpus.test.push_back(test.Next(true));
  return corpus;
}

std::vector<Token> SyntheticTargetInventory() {
  std::set<Token> words;
  for (const Frame &f : Frames()) {
    for (const Variant &v : f.en) {
      for (const Token &t : SplitTokens(v.en)) {
        if (t.front() != '{') words.insert(t);
      }
    }
  }
  for (const auto &[name, values] : Slots()) {
    for (const SlotValue &v : values) {
      for (const Token &t : SplitTokens(v.en)) words.insert(t);
    }
  }
  // Generated numbers.
  for (int h = 1; h <= 12; ++h) {
    for (const char *m : {"00", "15", "30", "45"}) words.insert(std::to_string(h) + ":" + m);
  }
  for (int m : {10, 15, 20, 25, 30, 40, 45}) words.insert(std::to_string(m));
  for (int d = 4; d <= 40; ++d) {
    for (const char *c : {"00", "50", "99", "25"}) words.insert(std::to_string(d) + "," + c);
  }
  return {words.begin(), words.end()};
}

}  // namespace cnlm
