#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixgraph/model.hpp"

namespace mixgraph {

// Text graph format, one item per line (UTF-8, LF):
//   nodes: A,B,C
//   A --> B
//   A --- C
//   B <-> C
//   amb: A,Z,B
void write_graph(std::ostream& out, const MarkedGraph& g);
std::string graph_to_string(const MarkedGraph& g);
/// Kinds are unknown to the text format; when `vars` is given the node list
/// must name exactly those variables and the graph is built over `vars`.
MarkedGraph read_graph(std::istream& in, const std::vector<VariableMeta>* vars = nullptr);
MarkedGraph graph_from_string(const std::string& text, const std::vector<VariableMeta>* vars = nullptr);
void save_graph(const std::filesystem::path& path, const MarkedGraph& g);
MarkedGraph load_graph(const std::filesystem::path& path, const std::vector<VariableMeta>* vars = nullptr);

// Variable sidecar (JSON):
//   {"variables": [{"name": "V1", "kind": "continuous"},
//                  {"name": "V2", "kind": "categorical", "levels": ["L0","L1","L2"]}]}
std::string variables_to_json(const std::vector<VariableMeta>& vars);
std::vector<VariableMeta> variables_from_json(const std::string& text);
void save_variables(const std::filesystem::path& path, const std::vector<VariableMeta>& vars);
std::vector<VariableMeta> load_variables(const std::filesystem::path& path);

// CSV data: header row of variable names, categorical cells written as level labels.
void write_csv(std::ostream& out, const MixedDataset& data);
void save_csv(const std::filesystem::path& path, const MixedDataset& data);
/// Without `vars`, a column is categorical if any cell fails to parse as a
/// number; its levels are the distinct labels in sorted order.
MixedDataset read_csv(std::istream& in, const std::vector<VariableMeta>* vars = nullptr);
MixedDataset load_csv(const std::filesystem::path& path, const std::vector<VariableMeta>* vars = nullptr);

/// Loads `path`, using `meta` if given, else a `meta.json` in the same directory if present.
MixedDataset load_dataset(const std::filesystem::path& path, const std::optional<std::filesystem::path>& meta = std::nullopt);

}  // namespace mixgraph
