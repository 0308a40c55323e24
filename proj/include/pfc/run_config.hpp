#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfc/aabpg.hpp"
#include "pfc/baseline.hpp"
#include "pfc/hybrid.hpp"
#include "pfc/lattice.hpp"
#include "pfc/model.hpp"
#include "pfc/newton_pcg.hpp"

namespace pfc {

struct SeedEntry {
  std::vector<int> h;
  Complex amplitude;
};

struct InitialSpec {
  enum class Kind { Seeds, Random, Snapshot };
  Kind kind = Kind::Seeds;
  std::vector<SeedEntry> seeds;
  double scale = 0.1;               // random noise amplitude
  std::filesystem::path snapshot;  // Kind::Snapshot
};

enum class SolverKind { Aabpg2, Aabpg4, Newton, Sis, Ssis1, Ssis2, Hybrid };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

struct SolverSpec {
  SolverKind kind = SolverKind::Aabpg2;
  AabpgConfig aabpg;
  BaselineConfig baseline;
  NewtonConfig newton;
  HybridConfig hybrid;
};

struct RunConfig {
  std::string preset;  // empty when built from a file alone
  ModelSpec model;
  LatticeSpec lattice;
  double padding = 2.0;
  InitialSpec initial;
  SolverSpec solver;
  std::filesystem::path output = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  nlohmann::json source;  // merged document the config was built from

  void validate() const;
};

/// Directory searched for presets/<name>.json and the seed files they name.
std::filesystem::path data_directory();

/// Preset document with relative file references resolved against the data directory.
nlohmann::json preset_json(const std::string& name);
std::vector<std::string> preset_names();

/// Config file document with relative file references resolved against its directory.
nlohmann::json config_file_json(const std::filesystem::path& path);

/// Merges `patch` into `base` (RFC 7386 merge patch).
nlohmann::json compose(nlohmann::json base, const nlohmann::json& patch);

/// Parses a document; a "preset" key pulls in that preset first, with the document as a patch.
RunConfig parse_run_config(const nlohmann::json& doc);

RunConfig load_run_config(const std::optional<std::filesystem::path>& file, const std::optional<std::string>& preset);

/// Whitespace-separated lines "h_1 ... h_n re im"; '#' starts a comment.
std::vector<SeedEntry> read_seed_file(const std::filesystem::path& path, int dimension);

/// Places seed amplitudes and completes them under h -> -h with conjugates. Throws ConfigError
/// for an index outside the box or a pair given inconsistent amplitudes.
FourierField place_seeds(const IndexGrid& grid, const std::vector<SeedEntry>& seeds);

/// Initial field for the run: mass-zero and Hermitian.
FourierField build_initial(const RunConfig& config, const IndexGrid& grid);

}  // namespace pfc
