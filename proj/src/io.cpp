#include "jpe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace jpe {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* label_name(RegionLabel label) {
  switch (label) {
    case RegionLabel::E0:
      return "E0";
    case RegionLabel::E:
      return "E";
    case RegionLabel::E1:
      return "E1";
    case RegionLabel::Em1:
      return "Em1";
    default:
      return "OnBoundary";
  }
}

std::string region_map_csv(const RegionMap& map) {
  std::string out = "x,y,label\n";
  for (std::size_t i = 0; i < map.labels.size(); ++i) {
    cplx z = map.grid.point(i);
    out += fmt(z.real());
    out += ',';
    out += fmt(z.imag());
    out += ',';
    out += label_name(map.labels[i]);
    out += '\n';
  }
  return out;
}

std::string field_csv(const ResolventField& field) {
  std::string out = "x,y,value\n";
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    cplx z = field.grid.point(i);
    out += fmt(z.real());
    out += ',';
    out += fmt(z.imag());
    out += ',';
    out += fmt(field.values[i]);
    out += '\n';
  }
  return out;
}

std::string eps_set_csv(const EpsSet& set) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < set.membership.size(); ++i) {
    if (!set.membership[i]) continue;
    cplx z = set.grid.point(i);
    out += fmt(z.real());
    out += ',';
    out += fmt(z.imag());
    out += '\n';
  }
  return out;
}

std::string profile_csv(std::span<const int> sizes,
                        std::span<const NormEstimate> profile) {
  std::string out = "n,value,certified_lower,iterations\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += std::to_string(sizes[i]);
    out += ',';
    out += fmt(profile[i].value);
    out += ',';
    out += profile[i].certified_lower ? '1' : '0';
    out += ',';
    out += std::to_string(profile[i].iterations);
    out += '\n';
  }
  return out;
}

std::string mask_csv(const ComplexGrid& grid,
                     const std::vector<std::uint8_t>& mask) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    cplx z = grid.point(i);
    out += fmt(z.real());
    out += ',';
    out += fmt(z.imag());
    out += '\n';
  }
  return out;
}

std::string fsm_report_json(const FsmReport& report) {
  nlohmann::json j;
  j["converged"] = report.converged;
  j["final_error_estimate"] = report.final_error_estimate;
  if (report.failure_mode) {
    switch (*report.failure_mode) {
      case FsmFailure::TruncationSingular:
        j["failure_mode"] = "TruncationSingular";
        break;
      case FsmFailure::ProfileDiverging:
        j["failure_mode"] = "ProfileDiverging";
        break;
      case FsmFailure::NotConverged:
        j["failure_mode"] = "NotConverged";
        break;
    }
  }
  nlohmann::json prof = nlohmann::json::array();
  for (const NormEstimate& e : report.stability_profile)
    prof.push_back({{"value", e.value},
                    {"certified_lower", e.certified_lower},
                    {"iterations", e.iterations}});
  j["stability_profile"] = prof;
  if (!report.solutions.empty()) {
    const FsmSolution& sol = report.solutions.back();
    nlohmann::json xs = nlohmann::json::array();
    for (std::size_t k = 0; k < sol.x.size(); ++k)
      xs.push_back({{"j", sol.lo + static_cast<std::int64_t>(k)},
                    {"re", sol.x[k].real()},
                    {"im", sol.x[k].imag()}});
    j["solution"] = xs;
  }
  return j.dump(2) + "\n";
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["triple"] = triple;
  j["seed"] = seed;
  j["version"] = "1.0.0";
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [name, hash] : outputs) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash));
    outs[name] = buf;
  }
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace jpe
