// gfm — fragment expressions over information artifacts: parse, resolve,
// extract, inspect the indexer catalog, and maintain hyperknowledge models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfm/gfm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(gfm::ErrorCode code) {
  switch (code) {
    case gfm::ErrorCode::FileUnreadable:
    case gfm::ErrorCode::IoError:
      return 3;
    default:
      return 2;
  }
}

struct GlobalFlags {
  bool json = false;
  bool quiet = false;
};

void print_report_text(std::ostream& os, const json& report) {
  os << "source: " << report.at("source").get<std::string>() << "\n";
  os << "media-type: " << report.at("media_type").get<std::string>() << "\n";
  os << "expression: " << report.at("expression").get<std::string>() << "\n";
  os << "bits:";
  for (const auto& span : report.at("bit_spans"))
    os << " [" << span[0].get<std::uint64_t>() << "," << span[1].get<std::uint64_t>() << ")";
  os << "\n";
  if (!report.at("extent").is_null()) {
    const json& e = report.at("extent");
    os << "extent: " << e.at("kind").get<std::string>();
    for (const auto& [key, value] : e.items())
      if (key != "kind") os << " " << key << "=" << value.dump();
    os << "\n";
  }
  if (report.contains("trail")) {
    std::size_t k = 1;
    for (const auto& entry : report.at("trail")) {
      os << "  " << k++ << ". " << entry.at("segment").get<std::string>();
      if (!entry.at("extent").is_null()) {
        const json& e = entry.at("extent");
        os << " -> " << e.at("kind").get<std::string>();
      }
      os << "\n";
    }
  }
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw gfm::GfmError(gfm::ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out.good())
    throw gfm::GfmError(gfm::ErrorCode::IoError, "write failed on '" + path.string() + "'");
}

gfm::Properties parse_props(const std::vector<std::string>& raw) {
  gfm::Properties props;
  for (const std::string& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw gfm::GfmError(gfm::ErrorCode::SyntaxError, "property must be KEY=VALUE: '" + kv + "'");
    props[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return props;
}

int cmd_parse(const GlobalFlags& flags, const std::string& expr_text) {
  const gfm::FragmentExpression expr = gfm::parse_expression(expr_text);
  const std::string canonical = gfm::print_expression(expr);
  if (flags.json) {
    std::cout << json{{"canonical", canonical}, {"segments", expr.segments.size()}}.dump() << "\n";
  } else if (!flags.quiet) {
    std::cout << canonical << "\n";
  }
  return 0;
}

int cmd_resolve(const GlobalFlags& flags, const std::string& file, const std::string& expr_text,
                const std::optional<std::string>& media_type, bool extract,
                const std::optional<std::string>& out_path) {
  const gfm::InformationArtifact artifact = gfm::load_artifact(file, media_type);
  const gfm::FragmentExpression expr = gfm::parse_expression(expr_text);
  const gfm::ResolvedFragment resolved = gfm::resolve(artifact, expr);
  const json report = gfm::resolution_report(artifact, expr, resolved);

  const bool extract_to_stdout = extract && !out_path;
  if (!extract_to_stdout && !flags.quiet) {
    if (flags.json) std::cout << report.dump() << "\n";
    else print_report_text(std::cout, report);
  }
  if (extract) {
    const gfm::InformationArtifact derived = gfm::as_artifact(artifact, resolved.fragment);
    if (out_path) {
      write_file(*out_path, derived.content);
    } else {
      std::cout.write(reinterpret_cast<const char*>(derived.content.data()),
                      static_cast<std::streamsize>(derived.content.size()));
    }
  }
  return 0;
}

int cmd_indexers(const GlobalFlags& flags, const std::string& arg) {
  gfm::MediaType media;
  if (fs::exists(arg) && fs::is_regular_file(arg)) {
    media = gfm::load_artifact(arg).media_type;
  } else if (const auto parsed = gfm::media_type_from_mime(arg)) {
    media = *parsed;
  } else {
    throw gfm::GfmError(gfm::ErrorCode::UnknownMediaType,
                        "'" + arg + "' is neither a readable file nor a supported media type");
  }

  const auto listings = gfm::list_indexers(media);
  if (flags.json) {
    json out = json::array();
    for (const auto& item : listings) {
      json params = json::array();
      for (const auto& [name, domain] : item.parameters)
        params.push_back({{"name", name}, {"domain", domain}});
      out.push_back({{"name", item.name},
                     {"parameters", std::move(params)},
                     {"output_kind", item.output_kind},
                     {"class", item.taxonomy}});
    }
    std::cout << json{{"media_type", std::string(gfm::mime_name(media))},
                      {"indexers", std::move(out)}}
                     .dump()
              << "\n";
  } else if (!flags.quiet) {
    std::cout << "indexers for " << gfm::mime_name(media) << ":\n";
    for (const auto& item : listings) {
      std::cout << "  " << item.name << "[";
      for (std::size_t i = 0; i < item.parameters.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << item.parameters[i].first << "=" << item.parameters[i].second;
      }
      std::cout << "] -> " << item.output_kind << " (" << item.taxonomy << ")\n";
    }
  }
  return 0;
}

json hk_resolution_report(const std::string& ref, const gfm::HkModel& model,
                          gfm::ArtifactStore& store) {
  const gfm::AnchorRef parsed = gfm::parse_anchor_ref(ref);
  const auto anchor = model.find_anchor(parsed);
  const gfm::ResolvedFragment resolved = model.resolve_anchor(ref, store);
  const gfm::InformationArtifact& artifact = store.require(resolved.fragment.source);

  json spans = json::array();
  for (const gfm::BitSpan& s : resolved.fragment.bits.spans()) spans.push_back({s.begin, s.end});
  json trail = json::array();
  for (const gfm::TrailEntry& t : resolved.trail) {
    trail.push_back(json{{"segment", t.segment},
                         {"extent", t.extent ? gfm::extent_json(*t.extent) : json(nullptr)}});
  }
  return json{{"ref", gfm::to_string(parsed)},
              {"source", artifact.id},
              {"media_type", std::string(gfm::mime_name(artifact.media_type))},
              {"expression", anchor && anchor->expr ? json(*anchor->expr) : json(nullptr)},
              {"bit_spans", std::move(spans)},
              {"extent", resolved.fragment.extent ? gfm::extent_json(*resolved.fragment.extent)
                                                  : json(nullptr)},
              {"trail", std::move(trail)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"General Fragment Model toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_flag("--json", flags.json, "machine-readable JSON output");
  app.add_flag("--quiet", flags.quiet, "suppress non-essential output");

  // parse
  std::string parse_expr;
  CLI::App* parse_cmd = app.add_subcommand("parse", "parse an expression, print canonical form");
  parse_cmd->add_option("expr", parse_expr, "fragment expression")->required();

  // resolve
  std::string resolve_file, resolve_expr;
  std::optional<std::string> resolve_media, resolve_out;
  bool resolve_extract = false;
  CLI::App* resolve_cmd = app.add_subcommand("resolve", "resolve an expression against a file");
  resolve_cmd->add_option("file", resolve_file, "artifact file")->required();
  resolve_cmd->add_option("expr", resolve_expr, "fragment expression")->required();
  resolve_cmd->add_option("--media-type", resolve_media, "override the media type");
  resolve_cmd->add_flag("--extract", resolve_extract, "write the addressed content");
  resolve_cmd->add_option("--out", resolve_out, "extraction output path");

  // indexers
  std::string indexers_arg;
  CLI::App* indexers_cmd = app.add_subcommand("indexers", "list indexers for a file or media type");
  indexers_cmd->add_option("target", indexers_arg, "file path or media type")->required();

  // hk
  CLI::App* hk = app.add_subcommand("hk", "hyperknowledge model operations");
  hk->require_subcommand(1);
  std::string hk_model;

  CLI::App* hk_init = hk->add_subcommand("init", "create an empty model file");
  hk_init->add_option("--model", hk_model, "model file")->required();

  std::string hk_node_id;
  std::optional<std::string> hk_node_artifact;
  std::vector<std::string> hk_props;
  CLI::App* hk_add_node = hk->add_subcommand("add-node", "add a node");
  hk_add_node->add_option("--model", hk_model, "model file")->required();
  hk_add_node->add_option("id", hk_node_id, "node id")->required();
  hk_add_node->add_option("--artifact", hk_node_artifact, "artifact id (relative path)");
  hk_add_node->add_option("--prop", hk_props, "property KEY=VALUE");

  std::string hk_anchor_node, hk_anchor_id, hk_anchor_expr;
  CLI::App* hk_add_anchor = hk->add_subcommand("add-anchor", "add an anchor to a node");
  hk_add_anchor->add_option("--model", hk_model, "model file")->required();
  hk_add_anchor->add_option("node", hk_anchor_node, "node id")->required();
  hk_add_anchor->add_option("id", hk_anchor_id, "anchor id")->required();
  hk_add_anchor->add_option("expr", hk_anchor_expr, "fragment expression")->required();
  hk_add_anchor->add_option("--prop", hk_props, "property KEY=VALUE");

  std::string hk_link_predicate;
  std::vector<std::string> hk_link_args;
  CLI::App* hk_add_link = hk->add_subcommand("add-link", "add an n-ary predicate link");
  hk_add_link->add_option("--model", hk_model, "model file")->required();
  hk_add_link->add_option("predicate", hk_link_predicate, "predicate name")->required();
  hk_add_link->add_option("args", hk_link_args, "anchor references (node or node#anchor)")
      ->required();

  std::optional<std::string> hk_query_predicate;
  std::vector<std::string> hk_query_pattern;
  CLI::App* hk_query = hk->add_subcommand("query", "query links");
  hk_query->add_option("--model", hk_model, "model file")->required();
  hk_query->add_option("--predicate", hk_query_predicate, "predicate filter");
  hk_query->add_option("--pattern", hk_query_pattern, "positional argument pattern, * wildcard");

  std::string hk_resolve_ref, hk_artifacts_dir;
  std::optional<std::string> hk_resolve_out;
  bool hk_resolve_extract = false;
  CLI::App* hk_resolve = hk->add_subcommand("resolve", "resolve an anchor against artifacts");
  hk_resolve->add_option("--model", hk_model, "model file")->required();
  hk_resolve->add_option("ref", hk_resolve_ref, "anchor reference")->required();
  hk_resolve->add_option("--artifacts", hk_artifacts_dir, "artifact store directory")->required();
  hk_resolve->add_flag("--extract", hk_resolve_extract, "write the addressed content");
  hk_resolve->add_option("--out", hk_resolve_out, "extraction output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(flags, parse_expr);
    if (resolve_cmd->parsed())
      return cmd_resolve(flags, resolve_file, resolve_expr, resolve_media, resolve_extract,
                         resolve_out);
    if (indexers_cmd->parsed()) return cmd_indexers(flags, indexers_arg);

    if (hk_init->parsed()) {
      if (fs::exists(hk_model))
        throw gfm::GfmError(gfm::ErrorCode::IoError, "'" + hk_model + "' already exists");
      gfm::HkModel{}.save(hk_model);
      if (flags.json) std::cout << json{{"ok", true}}.dump() << "\n";
      else if (!flags.quiet) std::cout << "initialized " << hk_model << "\n";
      return 0;
    }
    if (hk_add_node->parsed()) {
      gfm::HkModel model = gfm::HkModel::load(hk_model);
      model.add_node(hk_node_id, hk_node_artifact, parse_props(hk_props));
      model.save(hk_model);
      if (flags.json) std::cout << json{{"ok", true}}.dump() << "\n";
      else if (!flags.quiet) std::cout << "added node '" << hk_node_id << "'\n";
      return 0;
    }
    if (hk_add_anchor->parsed()) {
      gfm::HkModel model = gfm::HkModel::load(hk_model);
      model.add_anchor(hk_anchor_node, hk_anchor_id, hk_anchor_expr, parse_props(hk_props));
      model.save(hk_model);
      if (flags.json) std::cout << json{{"ok", true}}.dump() << "\n";
      else if (!flags.quiet)
        std::cout << "added anchor '" << hk_anchor_node << "#" << hk_anchor_id << "'\n";
      return 0;
    }
    if (hk_add_link->parsed()) {
      gfm::HkModel model = gfm::HkModel::load(hk_model);
      model.add_link(hk_link_predicate, hk_link_args);
      model.save(hk_model);
      if (flags.json) std::cout << json{{"ok", true}}.dump() << "\n";
      else if (!flags.quiet) std::cout << "added link '" << hk_link_predicate << "'\n";
      return 0;
    }
    if (hk_query->parsed()) {
      const gfm::HkModel model = gfm::HkModel::load(hk_model);
      std::optional<std::vector<std::string>> pattern;
      if (!hk_query_pattern.empty()) pattern = hk_query_pattern;
      const auto links = model.query_links(hk_query_predicate, pattern);
      if (flags.json) {
        json out = json::array();
        for (const gfm::HkLink& link : links) {
          json args = json::array();
          for (const gfm::AnchorRef& ref : link.args) args.push_back(gfm::to_string(ref));
          out.push_back(json{{"predicate", link.predicate}, {"args", std::move(args)}});
        }
        std::cout << out.dump() << "\n";
      } else if (!flags.quiet) {
        for (const gfm::HkLink& link : links) {
          std::cout << link.predicate << "(";
          for (std::size_t i = 0; i < link.args.size(); ++i) {
            if (i) std::cout << ",";
            std::cout << gfm::to_string(link.args[i]);
          }
          std::cout << ")\n";
        }
      }
      return 0;
    }
    if (hk_resolve->parsed()) {
      const gfm::HkModel model = gfm::HkModel::load(hk_model);
      gfm::ArtifactStore store{fs::path(hk_artifacts_dir)};
      const json report = hk_resolution_report(hk_resolve_ref, model, store);
      const bool extract_to_stdout = hk_resolve_extract && !hk_resolve_out;
      if (!extract_to_stdout && !flags.quiet) {
        if (flags.json) std::cout << report.dump() << "\n";
        else print_report_text(std::cout, report);
      }
      if (hk_resolve_extract) {
        const gfm::ResolvedFragment resolved = model.resolve_anchor(hk_resolve_ref, store);
        const gfm::InformationArtifact& artifact = store.require(resolved.fragment.source);
        const gfm::InformationArtifact derived = gfm::as_artifact(artifact, resolved.fragment);
        if (hk_resolve_out) {
          write_file(*hk_resolve_out, derived.content);
        } else {
          std::cout.write(reinterpret_cast<const char*>(derived.content.data()),
                          static_cast<std::streamsize>(derived.content.size()));
        }
      }
      return 0;
    }
  } catch (const gfm::SegmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const gfm::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gfm::GfmError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
