#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "streetlab/rdf/dataset.hpp"
#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Percent-encodes everything outside A-Z a-z 0-9 - . _ ~
std::string url_encode(std::string_view text);
/// Throws std::invalid_argument on a malformed escape.
std::string url_decode(std::string_view text);

/// Directory of scenario graphs, one `<url-encoded graph>.trig` file each,
/// plus behavior trees under `behaviors/*.trig`. Not synchronized; callers
/// serialize access.
class ScenarioRepository {
 public:
  explicit ScenarioRepository(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(std::string_view graph) const;

  /// Graph names with a file in the directory, ascending.
  std::vector<std::string> list() const;
  bool exists(std::string_view graph) const;
  /// Empty when no file exists; DecodeError/SyntaxError for bad content.
  std::optional<Scenario> load(std::string_view graph) const;
  /// Validates, then writes the TriG file (atomically via rename).
  void save(const Scenario& scenario) const;
  bool remove(std::string_view graph) const;

  /// Every behavior document merged into one dataset (blank nodes kept
  /// apart per file).
  rdf::Dataset load_behaviors() const;
  void save_behavior(std::string_view name, std::string_view trig_text) const;

  /// All scenario files concatenated in list() order.
  std::string export_all() const;

 private:
  std::filesystem::path dir_;
};

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace streetlab::scenario
