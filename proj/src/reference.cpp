#include "fabricmul/reference.hpp"

#include <fmt/format.h>

#include "json.hpp"

namespace fabricmul {

namespace {
#include "reference_data.inc"

const nlohmann::json& document() {
  static const nlohmann::json doc = nlohmann::json::parse(kReferenceTablesJson);
  return doc;
}
}  // namespace

std::string_view reference_tables_json() noexcept { return kReferenceTablesJson; }

std::vector<ReferenceResources> reference_resources() {
  std::vector<ReferenceResources> out;
  for (const auto& row : document().at("resources").at("rows"))
    out.push_back({row.at("design").get<std::string>(), row.at("luts").get<int>(),
                   row.at("carry4").get<int>()});
  return out;
}

std::vector<ReferenceCriticalPath> reference_critical_paths() {
  std::vector<ReferenceCriticalPath> out;
  for (const auto& row : document().at("critical_path_ns").at("rows"))
    out.push_back({row.at("design").get<std::string>(), row.at("total").get<double>(),
                   row.at("logic").get<double>(), row.at("net").get<double>()});
  return out;
}

std::string reference_resources_text() {
  std::string out = fmt::format("reference ({}):\n", document().at("resources").at("label").get<std::string>());
  out += fmt::format("  {:<30} {:>5} {:>7}\n", "design", "LUTs", "CARRY4");
  for (const auto& r : reference_resources())
    out += fmt::format("  {:<30} {:>5} {:>7}\n", r.design, r.luts, r.carry4);
  return out;
}

std::string reference_critical_paths_text() {
  std::string out =
      fmt::format("reference ({}):\n", document().at("critical_path_ns").at("label").get<std::string>());
  out += fmt::format("  {:<30} {:>7} {:>7} {:>7}\n", "design", "total", "logic", "net");
  for (const auto& r : reference_critical_paths())
    out += fmt::format("  {:<30} {:>7.3f} {:>7.3f} {:>7.3f}\n", r.design, r.total_ns, r.logic_ns, r.net_ns);
  return out;
}

}  // namespace fabricmul
