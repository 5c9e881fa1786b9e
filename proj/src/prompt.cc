// Copyright 2026 The ugsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ugsim/prompt.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ugsim/errors.h"
#include "ugsim/random.h"
#include "ugsim/reference_data.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string exemplar_block(PromptingMethod method, Side side,
                           const std::vector<Exemplar>& exemplars) {
  std::ostringstream out;
  if (method == PromptingMethod::kChainOfThought) {
    out << "Here are examples of decisions made by participants in this "
           "game, each followed by the participant's reason:";
  } else {
    out << "Here are examples of decisions made by participants in this "
           "game:";
  }
  for (const Exemplar& ex : exemplars) {
    out << "\nOffer: " << ex.offer;
    if (side == Side::kResponder) {
      out << " -> Decision: " << to_string(*ex.decision);
    }
    if (method == PromptingMethod::kChainOfThought) {
      out << "\nReason: " << *ex.rationale;
    }
  }
  return out.str();
}

struct FieldRef {
  std::string_view key;
  std::string PromptTemplate::*member;
};

constexpr FieldRef kFields[] = {
    {"game_explanation", &PromptTemplate::game_explanation},
    {"situation_proposer", &PromptTemplate::situation_proposer},
    {"situation_responder", &PromptTemplate::situation_responder},
    {"output_format_proposer", &PromptTemplate::output_format_proposer},
    {"output_format_responder", &PromptTemplate::output_format_responder},
};

Exemplar proposer_ex(int offer, const char* reason) {
  return {Side::kProposer, offer, std::nullopt, std::string(reason)};
}

Exemplar responder_ex(int offer, ResponderChoice choice, const char* reason) {
  return {Side::kResponder, offer, choice, std::string(reason)};
}

}  // namespace

std::string_view to_string(PromptingMethod method) {
  switch (method) {
    case PromptingMethod::kZeroShot:
      return "ZeroShot";
    case PromptingMethod::kFewShot:
      return "FewShot";
    case PromptingMethod::kChainOfThought:
      return "ChainOfThought";
  }
  return "ZeroShot";
}

std::string_view to_string(Side side) {
  return side == Side::kProposer ? "proposer" : "responder";
}

PromptingMethod parse_method(std::string_view text) {
  std::string t = to_lower(trim(text));
  if (t == "zeroshot" || t == "zero" || t == "zero-shot") {
    return PromptingMethod::kZeroShot;
  }
  if (t == "fewshot" || t == "few" || t == "few-shot") {
    return PromptingMethod::kFewShot;
  }
  if (t == "chainofthought" || t == "cot") {
    return PromptingMethod::kChainOfThought;
  }
  throw ConfigError("unknown prompting method '" + std::string(text) + "'");
}

Side parse_side(std::string_view text) {
  std::string t = to_lower(trim(text));
  if (t == "proposer") return Side::kProposer;
  if (t == "responder") return Side::kResponder;
  throw ConfigError("unknown side '" + std::string(text) + "'");
}

RenderedPrompt render_prompt(const PromptTemplate& tmpl, PromptingMethod method,
                             Side side, const std::vector<Exemplar>& exemplars,
                             std::optional<int> offer_shown) {
  if (side == Side::kResponder) {
    if (!offer_shown) throw PromptError("responder prompt needs an offer");
    if (*offer_shown < 0 || *offer_shown > kMaxOffer) {
      throw PromptError("offer " + std::to_string(*offer_shown) +
                        " outside [0, 100]");
    }
  } else if (offer_shown) {
    throw PromptError("proposer prompt cannot show an offer");
  }
  if (method != PromptingMethod::kZeroShot) {
    if (exemplars.empty()) {
      throw PromptError(std::string(to_string(method)) +
                        " prompting needs at least one exemplar");
    }
    for (const Exemplar& ex : exemplars) {
      if (ex.side != side) {
        throw PromptError("exemplar for the wrong side");
      }
      if (side == Side::kResponder && !ex.decision) {
        throw PromptError("responder exemplar without a decision");
      }
      if (method == PromptingMethod::kChainOfThought &&
          (!ex.rationale || trim(*ex.rationale).empty())) {
        throw PromptError("exemplar at offer " + std::to_string(ex.offer) +
                          " has no rationale; chain-of-thought needs one");
      }
    }
  }

  std::string situation;
  if (side == Side::kProposer) {
    situation = tmpl.situation_proposer;
  } else {
    situation = tmpl.situation_responder;
    std::size_t pos = situation.find(kOfferPlaceholder);
    if (pos != std::string::npos) {
      situation.replace(pos, kOfferPlaceholder.size(),
                        std::to_string(*offer_shown));
    }
  }

  std::vector<std::string_view> sections;
  if (tmpl.persona && !trim(*tmpl.persona).empty()) {
    sections.push_back(trim(*tmpl.persona));
  }
  sections.push_back(trim(tmpl.game_explanation));
  sections.push_back(trim(situation));
  std::string block;
  if (method != PromptingMethod::kZeroShot) {
    block = exemplar_block(method, side, exemplars);
    sections.push_back(block);
  }
  sections.push_back(trim(side == Side::kProposer
                              ? tmpl.output_format_proposer
                              : tmpl.output_format_responder));

  RenderedPrompt out{std::string(), method, side, offer_shown};
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i > 0) out.text += "\n\n";
    out.text += sections[i];
  }
  if (out.text.find(kOfferPlaceholder) != std::string::npos) {
    throw PromptError("unfilled {offer} placeholder in rendered prompt");
  }
  return out;
}

std::vector<std::string> validate_template(const PromptTemplate& tmpl) {
  std::vector<std::string> findings;
  for (const FieldRef& f : kFields) {
    if (trim(tmpl.*f.member).empty()) {
      findings.push_back(std::string(f.key) + " is empty");
    }
  }
  std::size_t placeholders =
      count_occurrences(tmpl.situation_responder, kOfferPlaceholder);
  if (placeholders != 1) {
    findings.push_back("situation_responder must contain exactly one " +
                       std::string(kOfferPlaceholder) + " placeholder, found " +
                       std::to_string(placeholders));
  }
  for (const FieldRef& f : kFields) {
    if (f.key == "situation_responder") continue;
    if ((tmpl.*f.member).find(kOfferPlaceholder) != std::string::npos) {
      findings.push_back(std::string(f.key) + " contains a stray " +
                         std::string(kOfferPlaceholder) + " placeholder");
    }
  }
  return findings;
}

const PromptTemplate& default_template() {
  static const PromptTemplate kTemplate{
      .game_explanation =
          "You are taking part in an economic experiment called the "
          "ultimatum game. Two players divide 100 coins between them. One "
          "player, the proposer, decides how many of the 100 coins to offer "
          "to the other player, the responder. The responder then decides "
          "whether to accept or reject the offer. If the responder accepts, "
          "the coins are divided as proposed. If the responder rejects, both "
          "players receive nothing. The game is played only once, and the "
          "two players never meet again. At the end of the experiment, each "
          "coin you hold will be redeemed to 100 dollars.",
      .situation_proposer =
          "You are the proposer. Decide how many of the 100 coins you offer "
          "to the responder. You keep the coins you do not offer.",
      .situation_responder =
          "You are the responder. The proposer offers you {offer} of the 100 "
          "coins and keeps the rest. Decide whether to accept or reject this "
          "offer.",
      .output_format_proposer =
          "You may explain your thinking first. End your answer with a final "
          "line that contains only a JSON object of the form {\"offer\": n}, "
          "where n is the whole number of coins from 0 to 100 you offer.",
      .output_format_responder =
          "You may explain your thinking first. End your answer with a final "
          "line that contains only a JSON object, either "
          "{\"decision\": \"accept\"} or {\"decision\": \"reject\"}.",
      .persona = std::nullopt,
  };
  return kTemplate;
}

const std::vector<Exemplar>& default_exemplars(Side side) {
  using RC = ResponderChoice;
  static const std::vector<Exemplar> kProposer = {
      proposer_ex(50, "An even split is fair and is very likely to be accepted."),
      proposer_ex(40, "Keeping a little more is fine, and 40 coins is still "
                      "enough that the responder should accept."),
      proposer_ex(50, "Splitting equally avoids the risk of losing everything."),
      proposer_ex(30, "The responder gains 3000 dollars by accepting, which "
                      "beats nothing, so I can keep more."),
      proposer_ex(45, "Nearly half is generous enough to be accepted while I "
                      "keep slightly more."),
      proposer_ex(50, "Half for each of us is the fairest division."),
      proposer_ex(20, "Any positive amount is better than nothing for the "
                      "responder, so a small offer may still pass."),
      proposer_ex(50, "I do not want my offer rejected, so I split evenly."),
      proposer_ex(35, "A modest offer balances my gain against the chance of "
                      "rejection."),
      proposer_ex(60, "Offering more than half makes rejection very unlikely."),
  };
  static const std::vector<Exemplar> kResponder = {
      responder_ex(50, RC::kAccept, "An equal split is fair."),
      responder_ex(30, RC::kAccept, "30 coins are worth 3000 dollars, which is "
                                    "better than nothing."),
      responder_ex(10, RC::kReject, "Keeping 90 coins for themselves is too "
                                    "unfair, so I refuse."),
      responder_ex(40, RC::kAccept, "The offer is close to half, so it is "
                                    "reasonable."),
      responder_ex(20, RC::kReject, "The proposer keeps four times my share; "
                                    "I would rather punish that."),
      responder_ex(50, RC::kAccept, "Half of the coins is a fair share."),
      responder_ex(0, RC::kReject, "Accepting gives me nothing, so rejecting "
                                   "costs me nothing."),
      responder_ex(45, RC::kAccept, "Almost half is a fair offer."),
      responder_ex(25, RC::kReject, "A quarter is too little compared to what "
                                    "the proposer keeps."),
      responder_ex(60, RC::kAccept, "I receive more than half, which is a "
                                    "generous offer."),
  };
  return side == Side::kProposer ? kProposer : kResponder;
}

PromptTemplate parse_template(std::string_view text, const std::string& name) {
  PromptTemplate tmpl;
  std::string* current = nullptr;
  std::optional<std::string> persona_body;
  bool in_persona = false;
  std::size_t line_no = 0;
  std::vector<std::string> seen;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::string_view t = trim(raw);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      std::string key(t.substr(1, t.size() - 2));
      for (const auto& s : seen) {
        if (s == key) throw LoadError(name, line_no, "duplicate key '" + key + "'");
      }
      seen.push_back(key);
      current = nullptr;
      in_persona = false;
      if (key == "persona") {
        persona_body.emplace();
        in_persona = true;
        continue;
      }
      for (const FieldRef& f : kFields) {
        if (f.key == key) current = &(tmpl.*f.member);
      }
      if (current == nullptr) {
        throw LoadError(name, line_no, "unknown key '" + key + "'");
      }
      continue;
    }
    if (current == nullptr && !in_persona) {
      if (t.empty() || t.front() == '#') continue;
      throw LoadError(name, line_no, "text before the first [key] header");
    }
    std::string& body = in_persona ? *persona_body : *current;
    body.append(raw);
    body.push_back('\n');
  }
  for (const FieldRef& f : kFields) {
    tmpl.*f.member = std::string(trim(tmpl.*f.member));
  }
  if (persona_body && !trim(*persona_body).empty()) {
    tmpl.persona = std::string(trim(*persona_body));
  }
  return tmpl;
}

PromptTemplate load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_template(buf.str(), path.string());
}

std::string serialize_template(const PromptTemplate& tmpl) {
  std::string out;
  if (tmpl.persona) out += "[persona]\n" + *tmpl.persona + "\n\n";
  for (const FieldRef& f : kFields) {
    out += "[" + std::string(f.key) + "]\n" + tmpl.*f.member + "\n\n";
  }
  return out;
}

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open exemplars " + path.string());
  std::vector<Exemplar> out;
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view t = trim(raw);
    if (t.empty() || t.front() == '#') continue;
    if (!seen_header) {
      if (t != "side,offer,decision,rationale") {
        throw LoadError(path.string(), line,
                        "expected header 'side,offer,decision,rationale'");
      }
      seen_header = true;
      continue;
    }
    auto parts = split(t, ',');
    if (parts.size() < 3) {
      throw LoadError(path.string(), line, "expected at least 3 fields");
    }
    Exemplar ex;
    try {
      ex.side = parse_side(parts[0]);
    } catch (const ConfigError& e) {
      throw LoadError(path.string(), line, std::string("field 'side': ") + e.what());
    }
    std::string offer(trim(parts[1]));
    try {
      std::size_t used = 0;
      ex.offer = std::stoi(offer, &used);
      if (used != offer.size()) throw std::invalid_argument(offer);
    } catch (const std::exception&) {
      throw LoadError(path.string(), line, "field 'offer': not an integer");
    }
    if (ex.offer < 0 || ex.offer > kMaxOffer) {
      throw LoadError(path.string(), line, "field 'offer': outside [0, 100]");
    }
    std::string decision = to_lower(trim(parts[2]));
    if (decision == "accept") {
      ex.decision = ResponderChoice::kAccept;
    } else if (decision == "reject") {
      ex.decision = ResponderChoice::kReject;
    } else if (!decision.empty()) {
      throw LoadError(path.string(), line,
                      "field 'decision': expected accept, reject or empty");
    }
    if (ex.side == Side::kResponder && !ex.decision) {
      throw LoadError(path.string(), line,
                      "field 'decision': required for responder exemplars");
    }
    if (parts.size() > 3) {
      std::size_t start = parts[3].data() - t.data();
      std::string_view rationale = trim(t.substr(start));
      if (!rationale.empty()) ex.rationale = std::string(rationale);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::string prompt_hash(const PromptTemplate& tmpl,
                        const std::vector<Exemplar>& proposer_exemplars,
                        const std::vector<Exemplar>& responder_exemplars) {
  std::uint64_t h = fnv1a(serialize_template(tmpl));
  for (const auto* list : {&proposer_exemplars, &responder_exemplars}) {
    h = fnv1a("|exemplars|", h);
    for (const Exemplar& ex : *list) {
      std::string line = std::string(to_string(ex.side)) + "," +
                         std::to_string(ex.offer) + "," +
                         (ex.decision ? std::string(to_string(*ex.decision)) : "") +
                         "," + ex.rationale.value_or("") + "\n";
      h = fnv1a(line, h);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ugsim
