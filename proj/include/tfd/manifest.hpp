#pragma once

// Manifest of emitted files with SHA-256 checksums (OpenSSL EVP).

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "tfd/io.hpp"

namespace tfd {

inline std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[md[k] >> 4]);
    out.push_back(hex[md[k] & 15]);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

/// Collects files written below one directory and emits manifest.json.
class ManifestWriter {
 public:
  explicit ManifestWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Writes `text` to dir/name and records it.
  void write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    entries_.push_back(Json{{"path", name}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
  }

  const std::filesystem::path& dir() const { return dir_; }

  void finish(const Json& meta = Json::object()) const {
    Json m{{"schema_version", kSchemaVersion}, {"meta", meta}, {"files", entries_}};
    write_text_file(dir_ / "manifest.json", dump_json(m));
  }

 private:
  std::filesystem::path dir_;
  Json entries_ = Json::array();
};

struct ManifestCheck {
  bool ok = true;
  std::vector<std::string> problems;
  std::size_t files = 0;
};

/// Re-hashes every file listed in dir/manifest.json.
inline ManifestCheck verify_manifest(const std::filesystem::path& dir) {
  ManifestCheck c;
  Json m;
  try {
    m = Json::parse(read_file(dir / "manifest.json"));
  } catch (const std::exception& e) {
    c.ok = false;
    c.problems.push_back(std::string("manifest unreadable: ") + e.what());
    return c;
  }
  for (const auto& f : m.at("files")) {
    ++c.files;
    const std::string name = f.at("path").get<std::string>();
    try {
      const std::string bytes = read_file(dir / name);
      if (sha256_hex(bytes) != f.at("sha256").get<std::string>()) {
        c.ok = false;
        c.problems.push_back(name + ": checksum mismatch");
      }
    } catch (const std::exception& e) {
      c.ok = false;
      c.problems.push_back(name + ": " + e.what());
    }
  }
  return c;
}

}  // namespace tfd
