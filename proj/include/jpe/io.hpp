#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jpe/fsm.hpp"
#include "jpe/pseudospec.hpp"
#include "jpe/regions.hpp"
#include "jpe/tridiag.hpp"

namespace jpe {

// Shortest decimal that round-trips the double (std::to_chars); infinities
// and NaN print as inf/-inf/nan.
std::string fmt(double x);

std::uint64_t fnv1a(std::string_view bytes);

const char* label_name(RegionLabel label);

// CSV serializers. All emit a header line, '\n' separators, no trailing
// whitespace; byte output depends only on the data.
std::string region_map_csv(const RegionMap& map);
std::string field_csv(const ResolventField& field);
std::string eps_set_csv(const EpsSet& set);
std::string profile_csv(std::span<const int> sizes,
                        std::span<const NormEstimate> profile);
std::string mask_csv(const ComplexGrid& grid,
                     const std::vector<std::uint8_t>& mask);

std::string fsm_report_json(const FsmReport& report);

// Reproducibility record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string triple;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;  // name, fnv1a

  std::string to_json() const;
};

void write_file(const std::string& path, std::string_view bytes);

}  // namespace jpe
