#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "lolog/estimate.hpp"
#include "lolog/gof.hpp"
#include "lolog/model.hpp"

namespace lolog::cli {

struct GofSettings {
  int r = 100;
  std::vector<GofStat> stats{GofStat::degree, GofStat::esp};
  std::vector<Vertex> checkpoints;
  bool log_bins = false;
};

/// Parsed model file. `text` is the file exactly as read.
struct ModelConfig {
  std::string text;
  std::string source;
  bool directed = false;
  std::optional<Vertex> vertices;
  std::vector<TermSpec> terms;
  std::optional<std::vector<double>> theta;
  OrderMode order = OrderMode::uniform;
  std::string entry_attr;
  std::vector<std::vector<std::string>> groups;
  std::vector<TermSpec> moments;
  FitConfig fit;
  GofSettings gof;
};

/// Throws InvalidArgument with "source:line: message" on malformed input,
/// unknown keys, or unknown term kinds.
ModelConfig parse_config(const std::string& text, const std::string& source);
ModelConfig load_config(const std::filesystem::path& path);

/// Everything needed to run: the vertex set, optional observed graph, and the model.
struct Dataset {
  VertexTable vertices;
  std::optional<Graph> graph;
  Model model;
};

/// Resolves the vertex set (attribute rows, else `vertices`, else edge-list
/// labels), reads the data and builds the validated model.
Dataset load_dataset(const ModelConfig& config, const std::optional<std::filesystem::path>& graph_path,
                     const std::optional<std::filesystem::path>& attrs_path);

}  // namespace lolog::cli
