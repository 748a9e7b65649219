#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circle.hpp"
#include "refine.hpp"

namespace arcphase {

using json = nlohmann::json;

/// Git blob id (SHA-1 of "blob <size>\0<content>") of `content`.
inline std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");

  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char byte[3];
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

/// Flat manifest object: every parameter plus `content_hash`, the git blob id
/// of the parameters' canonical (key-sorted, compact) JSON.
inline json make_manifest(const json& params) {
  if (!params.is_object()) throw std::invalid_argument("manifest parameters must be an object");
  if (params.contains("content_hash")) {
    throw std::invalid_argument("content_hash is a reserved manifest key");
  }
  json manifest = params;
  manifest["content_hash"] = git_blob_hash(params.dump());
  return manifest;
}

/// `results.csv` -> `results.manifest.json`
inline std::filesystem::path manifest_path_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".manifest.json");
  return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Offline refinement input: {"width": 0.3333, "lowers": [x1, x2, ...]}.
// Width defaults to 1/3. Lower bounds may be unreduced; they are taken mod 1.
struct RefineInput {
  double width = kThird;
  std::vector<double> lowers;

  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    out.reserve(lowers.size());
    for (double x : lowers) out.emplace_back(x, width);
    return out;
  }
};

inline RefineInput parse_refine_input(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("refine input must be a JSON object");
  RefineInput in;
  if (doc.contains("width")) in.width = doc.at("width").get<double>();
  if (!doc.contains("lowers") || !doc.at("lowers").is_array()) {
    throw std::invalid_argument("refine input needs a \"lowers\" array");
  }
  in.lowers = doc.at("lowers").get<std::vector<double>>();
  if (in.lowers.empty()) throw std::invalid_argument("refine input has no stage arcs");
  return in;
}

inline json refine_output(const RefinementResult& result, std::size_t stages) {
  return json{{"stages", stages},
              {"estimate", result.estimate.value()},
              {"arc_lower", result.final_arc.lower().value()},
              {"arc_width", result.final_arc.width()}};
}

}  // namespace arcphase
