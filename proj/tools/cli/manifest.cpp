#include "cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace tqkd::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

void RunManifest::emit(const std::string& file, const std::string& content) {
  write_file(std::filesystem::path(out_dir) / file, content);
  files.push_back({file, sha256_hex(content), content.size()});
}

Json RunManifest::to_json() const {
  Json list = Json::array();
  for (const auto& f : files) list.push_back(Json{{"file", f.file}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return Json{{"subcommand", subcommand},
              {"config", config_path ? Json(*config_path) : Json(nullptr)},
              {"seed", seed},
              {"out", out_dir},
              {"files", list}};
}

void RunManifest::write() const {
  write_file(std::filesystem::path(out_dir) / "manifest.json", dump(to_json()));
}

}  // namespace tqkd::cli
