#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gfm/artifact.hpp"
#include "gfm/error.hpp"
#include "gfm/grammar.hpp"
#include "gfm/resolver.hpp"

namespace gfm {

inline constexpr std::string_view kLambdaAnchorId = "λ";

using Properties = std::map<std::string, std::string>;

/// Node and anchor ids: grammar NAME charset widened to allow interior
/// uppercase ("horizonA"), '#' stays the sole reference separator.
inline bool is_hk_id(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s.substr(1)) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

struct HkNode {
  std::string id;
  std::optional<std::string> artifact;  // bound artifact id, absent for concepts
  Properties properties;
  friend bool operator==(const HkNode&, const HkNode&) = default;
};

struct HkAnchor {
  std::string node;
  std::string id;
  std::optional<std::string> expr;  // canonical expression; absent on lambda
  Properties properties;
  friend bool operator==(const HkAnchor&, const HkAnchor&) = default;
};

struct AnchorRef {
  std::string node;
  std::string anchor;  // "λ" for the lambda anchor

  bool is_lambda() const { return anchor == kLambdaAnchorId; }
  friend bool operator==(const AnchorRef&, const AnchorRef&) = default;
};

/// "node" (lambda shorthand) or "node#anchorid".
inline AnchorRef parse_anchor_ref(std::string_view text) {
  const auto hash = text.find('#');
  std::string node(text.substr(0, hash == std::string_view::npos ? text.size() : hash));
  if (!is_hk_id(node))
    throw GfmError(ErrorCode::SyntaxError, "bad node id in anchor reference '" + std::string(text) + "'");
  if (hash == std::string_view::npos) return AnchorRef{std::move(node), std::string(kLambdaAnchorId)};
  std::string anchor(text.substr(hash + 1));
  if (anchor != kLambdaAnchorId && !is_hk_id(anchor))
    throw GfmError(ErrorCode::SyntaxError,
                   "bad anchor id in anchor reference '" + std::string(text) + "'");
  return AnchorRef{std::move(node), std::move(anchor)};
}

inline std::string to_string(const AnchorRef& ref) {
  return ref.is_lambda() ? ref.node : ref.node + "#" + ref.anchor;
}

struct HkLink {
  std::string predicate;
  std::vector<AnchorRef> args;
  friend bool operator==(const HkLink&, const HkLink&) = default;
};

/// In-memory artifact store backed by an optional directory; ids are
/// relative paths within it.
class ArtifactStore {
 public:
  ArtifactStore() = default;
  explicit ArtifactStore(std::filesystem::path root) : root_(std::move(root)) {}

  void put(InformationArtifact artifact) {
    const std::string id = artifact.id;
    artifacts_.insert_or_assign(id, std::move(artifact));
  }

  const InformationArtifact& require(const std::string& id) {
    if (const auto it = artifacts_.find(id); it != artifacts_.end()) return it->second;
    if (root_) {
      InformationArtifact a = load_artifact(*root_ / id, std::nullopt, id);
      return artifacts_.emplace(id, std::move(a)).first->second;
    }
    throw GfmError(ErrorCode::FileUnreadable, "no artifact '" + id + "' in store");
  }

 private:
  std::map<std::string, InformationArtifact> artifacts_;
  std::optional<std::filesystem::path> root_;
};

/// Hyperknowledge-lite model: nodes, n-ary predicate links, property pairs,
/// anchors. Every node owns exactly one lambda anchor denoting its whole
/// content; node and lambda properties are one storage seen two ways.
class HkModel {
 public:
  // --- nodes ---

  void add_node(const std::string& id, std::optional<std::string> artifact = {},
                Properties properties = {}) {
    if (!is_hk_id(id)) throw GfmError(ErrorCode::SyntaxError, "bad node id '" + id + "'");
    if (nodes_.count(id)) throw GfmError(ErrorCode::DuplicateNode, "node '" + id + "' exists");
    nodes_.emplace(id, HkNode{id, std::move(artifact), std::move(properties)});
  }

  const HkNode* find_node(const std::string& id) const {
    const auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, HkNode>& nodes() const noexcept { return nodes_; }

  // --- anchors ---

  void add_anchor(const std::string& node, const std::string& id, const std::string& expr_text,
                  Properties properties = {}) {
    if (!nodes_.count(node)) throw GfmError(ErrorCode::UnknownNode, "no node '" + node + "'");
    if (id == kLambdaAnchorId)
      throw GfmError(ErrorCode::DuplicateAnchor, "'λ' is reserved for the lambda anchor");
    if (!is_hk_id(id)) throw GfmError(ErrorCode::SyntaxError, "bad anchor id '" + id + "'");
    if (anchors_.count({node, id}))
      throw GfmError(ErrorCode::DuplicateAnchor, "anchor '" + node + "#" + id + "' exists");
    // Parse before any mutation so a malformed expression leaves the model unchanged.
    const std::string canonical = print_expression(parse_expression(expr_text));
    anchors_.emplace(std::make_pair(node, id),
                     HkAnchor{node, id, canonical, std::move(properties)});
  }

  std::optional<HkAnchor> find_anchor(const AnchorRef& ref) const {
    const auto node = nodes_.find(ref.node);
    if (node == nodes_.end()) return std::nullopt;
    if (ref.is_lambda())
      return HkAnchor{ref.node, std::string(kLambdaAnchorId), std::nullopt,
                      node->second.properties};
    const auto it = anchors_.find({ref.node, ref.anchor});
    if (it == anchors_.end()) return std::nullopt;
    return it->second;
  }

  /// All anchors of a node, lambda first.
  std::vector<HkAnchor> anchors_of(const std::string& node) const {
    std::vector<HkAnchor> out;
    const auto it = nodes_.find(node);
    if (it == nodes_.end()) return out;
    out.push_back(HkAnchor{node, std::string(kLambdaAnchorId), std::nullopt, it->second.properties});
    for (auto a = anchors_.lower_bound({node, ""}); a != anchors_.end() && a->first.first == node;
         ++a)
      out.push_back(a->second);
    return out;
  }

  // --- properties (node and lambda share one storage) ---

  void set_property(const std::string& ref_text, const std::string& key,
                    const std::string& value) {
    const AnchorRef ref = parse_anchor_ref(ref_text);
    if (ref.is_lambda()) {
      const auto it = nodes_.find(ref.node);
      if (it == nodes_.end()) throw GfmError(ErrorCode::UnknownNode, "no node '" + ref.node + "'");
      it->second.properties[key] = value;
      return;
    }
    const auto it = anchors_.find({ref.node, ref.anchor});
    if (it == anchors_.end())
      throw GfmError(ErrorCode::UnknownAnchorRef, "no anchor '" + to_string(ref) + "'");
    it->second.properties[key] = value;
  }

  Properties properties_of(const std::string& ref_text) const {
    const AnchorRef ref = parse_anchor_ref(ref_text);
    const auto anchor = find_anchor(ref);
    if (!anchor) throw GfmError(ErrorCode::UnknownAnchorRef, "no anchor '" + to_string(ref) + "'");
    return anchor->properties;
  }

  // --- links ---

  void add_link(const std::string& predicate, const std::vector<std::string>& args) {
    if (!is_hk_id(predicate))
      throw GfmError(ErrorCode::SyntaxError, "bad predicate '" + predicate + "'");
    HkLink link;
    link.predicate = predicate;
    for (const std::string& arg : args) {
      AnchorRef ref = parse_anchor_ref(arg);
      if (!find_anchor(ref))
        throw GfmError(ErrorCode::UnknownAnchorRef, "no anchor '" + to_string(ref) + "'");
      link.args.push_back(std::move(ref));
    }
    links_.push_back(std::move(link));
  }

  const std::vector<HkLink>& links() const noexcept { return links_; }

  /// Links whose predicate matches and whose arguments match the pattern
  /// positionally; "*" matches anything, shorter patterns match prefixes.
  std::vector<HkLink> query_links(std::optional<std::string> predicate = {},
                                  std::optional<std::vector<std::string>> pattern = {}) const {
    std::vector<HkLink> out;
    for (const HkLink& link : links_) {
      if (predicate && link.predicate != *predicate) continue;
      if (pattern) {
        if (pattern->size() > link.args.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < pattern->size(); ++i) {
          const std::string& p = (*pattern)[i];
          if (p == "*") continue;
          if (parse_anchor_ref(p) != link.args[i]) {
            match = false;
            break;
          }
        }
        if (!match) continue;
      }
      out.push_back(link);
    }
    return out;
  }

  // --- resolution ---

  ResolvedFragment resolve_anchor(const std::string& ref_text, ArtifactStore& store,
                                  const IndexerRegistry& registry = builtin_registry()) const {
    const AnchorRef ref = parse_anchor_ref(ref_text);
    const auto anchor = find_anchor(ref);
    if (!anchor) throw GfmError(ErrorCode::UnknownAnchorRef, "no anchor '" + to_string(ref) + "'");
    const HkNode& node = nodes_.at(ref.node);
    if (!node.artifact)
      throw GfmError(ErrorCode::UnboundNode, "node '" + node.id + "' has no bound artifact");
    const InformationArtifact& artifact = store.require(*node.artifact);
    if (!anchor->expr) {  // lambda: the whole information content
      return ResolvedFragment{whole_fragment(artifact), {}};
    }
    return resolve(artifact, parse_expression(*anchor->expr), registry);
  }

  // --- persistence ---

  nlohmann::json to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, node] : nodes_) {
      nlohmann::json n{{"id", id}, {"properties", node.properties}};
      if (node.artifact) n["artifact"] = *node.artifact;
      nodes.push_back(std::move(n));
    }
    nlohmann::json anchors = nlohmann::json::array();  // lambdas omitted, regenerated on load
    for (const auto& [key, anchor] : anchors_) {
      anchors.push_back(nlohmann::json{{"node", anchor.node},
                                       {"id", anchor.id},
                                       {"expr", *anchor.expr},
                                       {"properties", anchor.properties}});
    }
    nlohmann::json links = nlohmann::json::array();
    for (const HkLink& link : links_) {
      nlohmann::json args = nlohmann::json::array();
      for (const AnchorRef& ref : link.args) args.push_back(to_string(ref));
      links.push_back(nlohmann::json{{"predicate", link.predicate}, {"args", std::move(args)}});
    }
    return nlohmann::json{
        {"nodes", std::move(nodes)}, {"anchors", std::move(anchors)}, {"links", std::move(links)}};
  }

  static HkModel from_json(const nlohmann::json& j) {
    HkModel m;
    try {
      for (const auto& n : j.at("nodes")) {
        std::optional<std::string> artifact;
        if (n.contains("artifact") && !n.at("artifact").is_null())
          artifact = n.at("artifact").get<std::string>();
        m.add_node(n.at("id").get<std::string>(), std::move(artifact),
                   n.value("properties", Properties{}));
      }
      for (const auto& a : j.at("anchors")) {
        m.add_anchor(a.at("node").get<std::string>(), a.at("id").get<std::string>(),
                     a.at("expr").get<std::string>(), a.value("properties", Properties{}));
      }
      for (const auto& l : j.at("links")) {
        m.add_link(l.at("predicate").get<std::string>(),
                   l.at("args").get<std::vector<std::string>>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw GfmError(ErrorCode::SyntaxError, std::string("malformed model document: ") + e.what());
    }
    return m;
  }

  /// Writes the model atomically: temp file in the same directory, then
  /// rename. `between_write_and_rename` is a failure-injection point for
  /// tests.
  void save(const std::filesystem::path& path,
            const std::function<void()>& between_write_and_rename = {}) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    try {
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw GfmError(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        out << to_json().dump(2) << "\n";
        if (!out.good()) throw GfmError(ErrorCode::IoError, "write failed on '" + tmp.string() + "'");
      }
      if (between_write_and_rename) between_write_and_rename();
      std::filesystem::rename(tmp, path);
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
  }

  static HkModel load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GfmError(ErrorCode::FileUnreadable, "cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw GfmError(ErrorCode::SyntaxError, std::string("model is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }

  friend bool operator==(const HkModel&, const HkModel&) = default;

 private:
  std::map<std::string, HkNode> nodes_;
  std::map<std::pair<std::string, std::string>, HkAnchor> anchors_;
  std::vector<HkLink> links_;
};

}  // namespace gfm
