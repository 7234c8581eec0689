#include "streetlab/scenario/repository.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "streetlab/rdf/trig.hpp"
#include "streetlab/scenario/quads.hpp"

namespace streetlab::scenario {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kExt = ".trig";

const rdf::PrefixMap& prefixes() {
  static const rdf::PrefixMap p{{"sl", std::string(vocab::kNs)}, {"xsd", std::string(rdf::xsd::kNamespace)}};
  return p;
}

}  // namespace

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string url_decode(std::string_view text) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    const int hi = i + 1 < text.size() ? hex(text[i + 1]) : -1;
    const int lo = i + 2 < text.size() ? hex(text[i + 2]) : -1;
    if (hi < 0 || lo < 0) throw std::invalid_argument("malformed percent escape");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

ScenarioRepository::ScenarioRepository(fs::path dir) : dir_(std::move(dir)) {}

fs::path ScenarioRepository::file_for(std::string_view graph) const {
  return dir_ / (url_encode(graph) + std::string(kExt));
}

std::vector<std::string> ScenarioRepository::list() const {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= kExt.size() || !name.ends_with(kExt)) continue;
    try {
      out.push_back(url_decode(std::string_view(name).substr(0, name.size() - kExt.size())));
    } catch (const std::invalid_argument&) {
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ScenarioRepository::exists(std::string_view graph) const {
  std::error_code ec;
  return fs::is_regular_file(file_for(graph), ec);
}

std::optional<Scenario> ScenarioRepository::load(std::string_view graph) const {
  if (!exists(graph)) return std::nullopt;
  const rdf::Dataset d = rdf::parse_trig(read_file(file_for(graph)));
  return from_quads(d, std::string(graph));
}

void ScenarioRepository::save(const Scenario& scenario) const {
  const rdf::Dataset d = to_dataset(scenario);
  write_file_atomic(file_for(scenario.graph), rdf::serialize_trig(d, prefixes()));
}

bool ScenarioRepository::remove(std::string_view graph) const {
  std::error_code ec;
  return fs::remove(file_for(graph), ec);
}

rdf::Dataset ScenarioRepository::load_behaviors() const {
  rdf::Dataset out;
  const fs::path bdir = dir_ / "behaviors";
  std::error_code ec;
  if (!fs::is_directory(bdir, ec)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(bdir, ec))
    if (entry.is_regular_file() && entry.path().extension() == kExt) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (std::size_t i = 0; i < files.size(); ++i) {
    rdf::ParseOptions opts;
    opts.blank_prefix = "f" + std::to_string(i) + "b";
    try {
      out.merge(rdf::parse_trig(read_file(files[i]), opts));
    } catch (const rdf::SyntaxError& e) {
      throw rdf::SyntaxError(e.line(), e.column(), files[i].filename().string() + ": " + e.message());
    }
  }
  return out;
}

void ScenarioRepository::save_behavior(std::string_view name, std::string_view trig_text) const {
  write_file_atomic(dir_ / "behaviors" / (url_encode(name) + std::string(kExt)), trig_text);
}

std::string ScenarioRepository::export_all() const {
  std::string out;
  for (const auto& g : list()) out += read_file(file_for(g));
  return out;
}

}  // namespace streetlab::scenario
