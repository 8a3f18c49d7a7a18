#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anvil/token.hpp"

namespace anvil {

// The fixed inventory of dependency variables. Each variable is indexed on
// the modified word: mod[copier] = document.
enum class Var : std::uint8_t { kMod, kPrep, kPhead, kRel, kCop, kVhead, kAmod };

inline constexpr std::array<Var, 7> kAllVars{Var::kMod,   Var::kPrep, Var::kPhead,
                                             Var::kRel,   Var::kCop,  Var::kVhead,
                                             Var::kAmod};

std::string_view var_name(Var var);
std::optional<Var> parse_var(std::string_view name);

struct Link {
  std::size_t anchor = 0;
  std::size_t dependent = 0;

  auto operator<=>(const Link&) const = default;
};

// Labelled word-to-word dependencies over the positions of one token list,
// plus the unindexed head set.
class DependencyStructure {
 public:
  DependencyStructure() = default;
  explicit DependencyStructure(std::size_t token_count) : token_count_(token_count) {}

  std::size_t token_count() const noexcept { return token_count_; }

  // Heads are kept sorted; adding an existing head is a no-op.
  void add_head(std::size_t position);
  const std::vector<std::size_t>& heads() const noexcept { return heads_; }
  bool is_head(std::size_t position) const;

  // Returns false when the link is already present. Throws std::out_of_range
  // for positions past the token list and std::invalid_argument for a
  // self-link.
  bool add_link(Var var, std::size_t anchor, std::size_t dependent);

  // Entries of one variable, sorted by (anchor, dependent).
  std::span<const Link> links(Var var) const noexcept {
    return vars_[static_cast<std::size_t>(var)];
  }
  std::vector<std::size_t> dependents(Var var, std::size_t anchor) const;
  bool is_dependent(Var var, std::size_t position) const;
  bool is_dependent_anywhere(std::size_t position) const;
  std::size_t link_count() const;

  bool operator==(const DependencyStructure&) const = default;

 private:
  std::size_t token_count_ = 0;
  std::vector<std::size_t> heads_;
  std::array<std::vector<Link>, kAllVars.size()> vars_;
};

// A chain of variables written outermost-first: phead:prep reaches the
// object of a preposition attached to the anchor.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Var> names);

  // Throws Error(kUnknownVariable) for names outside the inventory and
  // Error(kSyntaxError) for an empty path.
  static Path parse(std::string_view text);

  const std::vector<Var>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  std::string str() const;

  bool operator==(const Path&) const = default;

 private:
  std::vector<Var> names_;
};

// Follows the path from the anchor, innermost variable first. Returns the
// sorted set of positions reached; empty when a link is missing.
std::vector<std::size_t> resolve_path(const DependencyStructure& structure,
                                      const Path& path, std::size_t anchor);

// Same walk started from every anchor at once: all positions at the end of
// the path anywhere in the structure.
std::vector<std::size_t> path_extent(const DependencyStructure& structure,
                                     const Path& path);

// True when `target` is reachable from `anchor` along `path`.
bool on_path(const DependencyStructure& structure, const Path& path,
             std::size_t anchor, std::size_t target);

struct RenderOptions {
  // Prefix every line with four spaces.
  bool indent = false;
  // Pad the left-hand sides of entry lines so the '=' signs line up.
  bool align = true;
};

// Canonical indexed-variable listing:
//
//   head = copier
//   mod[copier]   = document
//   mod[document] = colour
//
// Entries are listed depth-first from the heads, children by position;
// entries unreachable from any head follow in (anchor, dependent) order.
// A surface occurring more than once in the phrase is written as
// surface@position so distinct structures never render alike.
std::string render_structure(const DependencyStructure& structure,
                             std::span<const Token> tokens, RenderOptions options = {});

}  // namespace anvil
