#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "quasicomb/coset_ring.hpp"
#include "quasicomb/detect.hpp"
#include "quasicomb/distribution.hpp"
#include "quasicomb/lattice.hpp"
#include "quasicomb/testfn.hpp"

namespace quasicomb::io {

using Json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

/// {"format_version", "kind", "payload", "meta"}.
struct Document {
  std::string kind;
  Json payload;
  Json meta = Json::object();
};

/// Canonical text: sorted keys, two-space indent, trailing newline.
/// Exact rationals are strings, floats are shortest round-trip numbers.
std::string dump(const Document& doc);
/// Throws ParseError on malformed JSON, a version mismatch or an unknown kind.
Document parse(std::string_view text);
Document read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Document& doc);

// Payload codecs. Decoders throw ParseError on shape or type errors.

Json encode(const Real& r);
Real decode_real(const Json& j);

Json encode(const Lattice& lattice);
Lattice decode_lattice(const Json& j);

Json encode(const Coset& coset);
Coset decode_coset(const Json& j);

Json encode(const CosetExpression& expr);
CosetExpression decode_expression(const Json& j);

Json encode(const WFunction& w);
WFunction decode_wfunction(const Json& j, int dim);

Json encode(const CombDistribution& f);
CombDistribution decode_distribution(const Json& j);

Json encode(const TestFunction& f);
TestFunction decode_testfunction(const Json& j);

Json encode(const PointCloud& cloud);
PointCloud decode_point_cloud(const Json& j);

Json encode(const CosetFit& fit);
CosetFit decode_fit(const Json& j);

Json encode(const NormalizedSystem& system);

/// Wraps a payload in a document of the given kind.
Document make_document(std::string kind, Json payload, Json meta = Json::object());

/// Payload of `doc`, checking that it has the expected kind.
const Json& expect_kind(const Document& doc, std::string_view kind);

}  // namespace quasicomb::io
