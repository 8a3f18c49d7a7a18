#include "anvil/dependency.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "anvil/error.hpp"

namespace anvil {

namespace {

constexpr std::array<std::string_view, kAllVars.size()> kVarNames{
    "mod", "prep", "phead", "rel", "cop", "vhead", "amod"};

void sort_unique(std::vector<std::size_t>& positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
}

}  // namespace

std::string_view var_name(Var var) { return kVarNames[static_cast<std::size_t>(var)]; }

std::optional<Var> parse_var(std::string_view name) {
  for (std::size_t i = 0; i < kVarNames.size(); ++i) {
    if (kVarNames[i] == name) return kAllVars[i];
  }
  return std::nullopt;
}

void DependencyStructure::add_head(std::size_t position) {
  if (position >= token_count_) throw std::out_of_range("head position out of range");
  auto it = std::lower_bound(heads_.begin(), heads_.end(), position);
  if (it == heads_.end() || *it != position) heads_.insert(it, position);
}

bool DependencyStructure::is_head(std::size_t position) const {
  return std::binary_search(heads_.begin(), heads_.end(), position);
}

bool DependencyStructure::add_link(Var var, std::size_t anchor, std::size_t dependent) {
  if (anchor >= token_count_ || dependent >= token_count_) {
    throw std::out_of_range("link endpoint out of range");
  }
  if (anchor == dependent) throw std::invalid_argument("self-link");
  auto& entries = vars_[static_cast<std::size_t>(var)];
  const Link link{anchor, dependent};
  auto it = std::lower_bound(entries.begin(), entries.end(), link);
  if (it != entries.end() && *it == link) return false;
  entries.insert(it, link);
  return true;
}

std::vector<std::size_t> DependencyStructure::dependents(Var var, std::size_t anchor) const {
  std::vector<std::size_t> out;
  const auto& entries = vars_[static_cast<std::size_t>(var)];
  auto it = std::lower_bound(entries.begin(), entries.end(), Link{anchor, 0});
  for (; it != entries.end() && it->anchor == anchor; ++it) out.push_back(it->dependent);
  return out;
}

bool DependencyStructure::is_dependent(Var var, std::size_t position) const {
  const auto& entries = vars_[static_cast<std::size_t>(var)];
  return std::any_of(entries.begin(), entries.end(),
                     [&](const Link& l) { return l.dependent == position; });
}

bool DependencyStructure::is_dependent_anywhere(std::size_t position) const {
  return std::any_of(kAllVars.begin(), kAllVars.end(),
                     [&](Var v) { return is_dependent(v, position); });
}

std::size_t DependencyStructure::link_count() const {
  std::size_t n = 0;
  for (const auto& entries : vars_) n += entries.size();
  return n;
}

Path::Path(std::vector<Var> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::kSyntaxError, "empty path");
}

Path Path::parse(std::string_view text) {
  std::vector<Var> names;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    const auto part = text.substr(start, colon == std::string_view::npos ? text.npos
                                                                         : colon - start);
    if (part.empty()) throw Error(ErrorCode::kSyntaxError, "empty path component in '" +
                                                               std::string(text) + "'");
    const auto var = parse_var(part);
    if (!var) {
      throw Error(ErrorCode::kUnknownVariable,
                  "unknown variable '" + std::string(part) + "'");
    }
    names.push_back(*var);
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return Path(std::move(names));
}

std::string Path::str() const {
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i != 0) out += ':';
    out += var_name(names_[i]);
  }
  return out;
}

std::vector<std::size_t> resolve_path(const DependencyStructure& structure,
                                      const Path& path, std::size_t anchor) {
  if (anchor >= structure.token_count()) throw std::out_of_range("anchor out of range");
  std::vector<std::size_t> frontier{anchor};
  for (auto it = path.names().rbegin(); it != path.names().rend(); ++it) {
    std::vector<std::size_t> next;
    for (std::size_t from : frontier) {
      for (std::size_t to : structure.dependents(*it, from)) next.push_back(to);
    }
    sort_unique(next);
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

std::vector<std::size_t> path_extent(const DependencyStructure& structure,
                                     const Path& path) {
  std::vector<std::size_t> frontier;
  bool first = true;
  for (auto it = path.names().rbegin(); it != path.names().rend(); ++it) {
    std::vector<std::size_t> next;
    for (const Link& link : structure.links(*it)) {
      if (first || std::binary_search(frontier.begin(), frontier.end(), link.anchor)) {
        next.push_back(link.dependent);
      }
    }
    sort_unique(next);
    frontier = std::move(next);
    first = false;
    if (frontier.empty()) break;
  }
  return frontier;
}

bool on_path(const DependencyStructure& structure, const Path& path, std::size_t anchor,
             std::size_t target) {
  const auto reached = resolve_path(structure, path, anchor);
  return std::binary_search(reached.begin(), reached.end(), target);
}

namespace {

struct Entry {
  Var var;
  Link link;
};

class Renderer {
 public:
  Renderer(const DependencyStructure& structure, std::span<const Token> tokens,
           RenderOptions options)
      : structure_(structure), tokens_(tokens), options_(options) {
    std::map<std::string, int> counts;
    for (const auto& t : tokens_) ++counts[t.surface];
    for (const auto& t : tokens_) {
      labels_.push_back(counts[t.surface] > 1
                            ? t.surface + "@" + std::to_string(t.position)
                            : t.surface);
    }
    for (Var var : kAllVars) {
      for (const Link& link : structure_.links(var)) pending_.push_back({var, link});
    }
    std::sort(pending_.begin(), pending_.end(), [](const Entry& a, const Entry& b) {
      if (a.link != b.link) return a.link < b.link;
      return a.var < b.var;
    });
    emitted_.assign(pending_.size(), false);
    for (const auto& e : pending_) width_ = std::max(width_, lhs(e).size());
  }

  std::string run() {
    for (std::size_t head : structure_.heads()) {
      out_ += prefix() + "head = " + labels_[head] + "\n";
    }
    std::vector<bool> visited(tokens_.size(), false);
    for (std::size_t head : structure_.heads()) visit(head, visited);
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      if (!emitted_[i]) emit(i);
    }
    return out_;
  }

 private:
  void visit(std::size_t anchor, std::vector<bool>& visited) {
    if (visited[anchor]) return;
    visited[anchor] = true;
    // Children of one anchor in dependent-position order.
    std::vector<std::size_t> children;
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      if (!emitted_[i] && pending_[i].link.anchor == anchor) children.push_back(i);
    }
    std::stable_sort(children.begin(), children.end(), [&](std::size_t a, std::size_t b) {
      return pending_[a].link.dependent < pending_[b].link.dependent;
    });
    for (std::size_t i : children) {
      if (emitted_[i]) continue;
      emit(i);
      visit(pending_[i].link.dependent, visited);
    }
  }

  void emit(std::size_t i) {
    emitted_[i] = true;
    const auto& e = pending_[i];
    std::string left = lhs(e);
    if (options_.align) left.resize(width_, ' ');
    out_ += prefix() + left + " = " + labels_[e.link.dependent] + "\n";
  }

  std::string lhs(const Entry& e) const {
    return std::string(var_name(e.var)) + "[" + labels_[e.link.anchor] + "]";
  }

  std::string prefix() const { return options_.indent ? "    " : ""; }

  const DependencyStructure& structure_;
  std::span<const Token> tokens_;
  RenderOptions options_;
  std::size_t width_ = 0;
  std::vector<std::string> labels_;
  std::vector<Entry> pending_;
  std::vector<bool> emitted_;
  std::string out_;
};

}  // namespace

std::string render_structure(const DependencyStructure& structure,
                             std::span<const Token> tokens, RenderOptions options) {
  if (tokens.size() != structure.token_count()) {
    throw std::invalid_argument("token list does not match structure");
  }
  return Renderer(structure, tokens, options).run();
}

}  // namespace anvil
