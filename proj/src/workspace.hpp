#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "http.hpp"

namespace kgqa {

inline constexpr const char* kToolVersion = "1.0.0";

struct StageSummary {
  std::string stage;
  std::vector<std::string> outputs;  // workspace-relative
  std::string message;
};

struct RunLabels {
  std::string name;     // run directory under runs/; derived when empty
  std::string model = "unknown";
  std::string stage = "vanilla";
  std::string variant;  // taken from the sidecar when empty
};

/// Pipeline stages over a workspace directory:
///   raw/ abstracts/ clean/ datasets/{variant}/ runs/{name}/
/// Each stage reads the previous stage's files, writes its own, and records
/// digests of both in manifest.json.
class Workspace {
 public:
  Workspace(std::filesystem::path root, Config config);

  const std::filesystem::path& root() const { return root_; }
  const Config& config() const { return config_; }

  // Overrides the transport chosen from config (tests, embedding).
  void set_ingest_transport(std::shared_ptr<HttpTransport> t) { ingest_transport_ = std::move(t); }
  void set_abstract_transport(std::shared_ptr<HttpTransport> t) { abstract_transport_ = std::move(t); }

  StageSummary ingest();
  StageSummary fetch_abstracts();
  StageSummary build();
  StageSummary generate();
  StageSummary split();
  StageSummary evaluate(const std::filesystem::path& predictions, const std::filesystem::path& eval,
                        const std::filesystem::path& meta, RunLabels labels);
  /// Writes runs/<name>/predictions.json; also scores them when a meta.json
  /// sits next to the eval file.
  StageSummary baseline(const std::filesystem::path& eval, RunLabels labels);
  StageSummary report(const std::string& pattern = "runs/*");

  std::vector<std::string> variants() const;

 private:
  std::filesystem::path path(const std::string& rel) const { return root_ / rel; }
  std::filesystem::path require(const std::string& rel, const char* producer) const;
  std::filesystem::path resolve_input(const std::filesystem::path& p) const;
  std::string write(const std::string& rel, const std::string& data);
  std::string write_json(const std::string& rel, const nlohmann::ordered_json& j);
  void record(const std::string& stage, const std::vector<std::filesystem::path>& inputs,
              const std::vector<std::string>& outputs);
  std::string display(const std::filesystem::path& p) const;
  std::shared_ptr<HttpTransport> transport_for(const std::string& prefix);

  std::filesystem::path root_;
  Config config_;
  std::shared_ptr<HttpTransport> ingest_transport_;
  std::shared_ptr<HttpTransport> abstract_transport_;
};

/// Expands a '/'-separated pattern with '*' and '?' wildcards relative to
/// base; results are sorted.
std::vector<std::filesystem::path> glob_paths(const std::filesystem::path& base, const std::string& pattern);

}  // namespace kgqa
