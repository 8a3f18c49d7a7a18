#include "anvil/token.hpp"

#include <array>
#include <utility>

namespace anvil {

namespace {

constexpr std::array<std::pair<PartOfSpeech, std::string_view>, 12> kNames{{
    {PartOfSpeech::kNoun, "noun"},
    {PartOfSpeech::kVerb, "verb"},
    {PartOfSpeech::kAdj, "adj"},
    {PartOfSpeech::kAdv, "adv"},
    {PartOfSpeech::kDet, "det"},
    {PartOfSpeech::kPrep, "prep"},
    {PartOfSpeech::kRelPron, "relpron"},
    {PartOfSpeech::kCop, "cop"},
    {PartOfSpeech::kConj, "conj"},
    {PartOfSpeech::kNum, "num"},
    {PartOfSpeech::kPunct, "punct"},
    {PartOfSpeech::kOther, "other"},
}};

}  // namespace

std::string_view pos_name(PartOfSpeech pos) {
  for (const auto& [value, name] : kNames) {
    if (value == pos) return name;
  }
  return "other";
}

std::optional<PartOfSpeech> parse_pos(std::string_view name) {
  for (const auto& [value, text] : kNames) {
    if (text == name) return value;
  }
  return std::nullopt;
}

bool is_content(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kNoun:
    case PartOfSpeech::kVerb:
    case PartOfSpeech::kAdj:
    case PartOfSpeech::kAdv:
    case PartOfSpeech::kNum:
      return true;
    default:
      return false;
  }
}

}  // namespace anvil
