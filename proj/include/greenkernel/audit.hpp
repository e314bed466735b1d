#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenkernel/green.hpp"

namespace greenkernel {

inline constexpr const char* kVersion = "0.1.0";

enum class AuditStatus { exact, up_to_unit, fail };

/// "exact", "up-to-unit" or "fail".
std::string status_name(AuditStatus s);

struct AuditCheck {
  std::string name;
  /// The identity or statement being checked.
  std::string anchor;
  std::string instance;
  AuditStatus status = AuditStatus::fail;
  /// c with lhs = c * rhs, for up-to-unit rows.
  std::optional<std::uint32_t> scalar;
  /// A concrete discrepancy, for failing rows.
  std::optional<std::string> witness;
  double ms = 0;
};

struct AuditReport {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::vector<std::string> battery;
  std::string version = kVersion;
  /// Sorted by name, then instance.
  std::vector<AuditCheck> checks;

  std::size_t count(AuditStatus s) const;
};

struct AuditOptions {
  std::size_t jobs = 1;
  /// When false every row reports ms = 0, making reports byte-identical across runs.
  bool timing = true;
};

/// C2, C3, V4, C4, C6, S3, A4.
std::vector<std::string> default_battery();

/// {1, P, G} for the deterministic Sylow p-subgroup P.
std::vector<GroupPtr> sylow_family(const GroupPtr& g, std::uint32_t p);

/// Mackey and Green functor axioms on the subgroups in `family` (all small subgroups of g when empty).
AuditReport audit_mackey(GroupPtr g, const std::string& label, const GreenParams& params,
                         std::vector<GroupPtr> family = {}, const AuditOptions& options = {});

/// The standing assumptions and their consequences on every group in the battery.
AuditReport audit_assumptions(const std::vector<std::string>& battery, const GreenParams& params,
                              const AuditOptions& options = {});

nlohmann::ordered_json to_json(const AuditReport& report);

/// The JSON schema of audit reports, as shipped in schemas/audit_report.schema.json.
const nlohmann::json& audit_report_schema();

/// Checks `instance` against a JSON schema using the keywords type, enum, const, minimum, minLength,
/// required, properties, additionalProperties (boolean), items, allOf and if/then.
/// Returns one message per violation; empty means valid.
std::vector<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace greenkernel
