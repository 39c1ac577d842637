#pragma once

/**
 * @file proof_script.hpp
 * @brief Proof scripts as data: step records, JSON round trip, and the
 * report produced by running one.
 */

#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace semistable {

enum class StepKind { CompareBound, DegreeBound, RamExponent, GroupFact, RayClassFact, SimReplay, KWFact, WeilCheck };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::CompareBound: return "CompareBound";
    case StepKind::DegreeBound: return "DegreeBound";
    case StepKind::RamExponent: return "RamExponent";
    case StepKind::GroupFact: return "GroupFact";
    case StepKind::RayClassFact: return "RayClassFact";
    case StepKind::SimReplay: return "SimReplay";
    case StepKind::KWFact: return "KWFact";
    case StepKind::WeilCheck: return "WeilCheck";
  }
  return "?";
}

inline StepKind parse_step_kind(const std::string& s) {
  for (auto k : {StepKind::CompareBound, StepKind::DegreeBound, StepKind::RamExponent, StepKind::GroupFact,
                 StepKind::RayClassFact, StepKind::SimReplay, StepKind::KWFact, StepKind::WeilCheck}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown step kind '" + s + "'");
}

struct ProofStep {
  std::string id;
  StepKind kind = StepKind::CompareBound;
  std::string citation;  ///< the claim this step certifies
  nlohmann::json inputs = nlohmann::json::object();
};

struct ProofScript {
  std::string case_id;
  std::vector<ProofStep> steps;
};

inline nlohmann::json script_to_json(const ProofScript& s) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : s.steps) {
    steps.push_back({{"id", st.id}, {"kind", to_string(st.kind)}, {"citation", st.citation}, {"inputs", st.inputs}});
  }
  return {{"case", s.case_id}, {"steps", steps}};
}

/// Inverse of script_to_json. Malformed scripts are configuration errors.
inline ProofScript script_from_json(const nlohmann::json& j) {
  ProofScript s;
  try {
    s.case_id = j.at("case").get<std::string>();
    for (const auto& js : j.at("steps")) {
      ProofStep st;
      st.id = js.at("id").get<std::string>();
      st.kind = parse_step_kind(js.at("kind").get<std::string>());
      st.citation = js.value("citation", "");
      st.inputs = js.value("inputs", nlohmann::json::object());
      if (st.citation.empty()) throw ConfigError("step " + st.id + " has no citation");
      s.steps.push_back(std::move(st));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed proof script: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// reports

enum class StepStatus { Pass, Fail, TrustedInput };

inline const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Pass: return "Pass";
    case StepStatus::Fail: return "Fail";
    case StepStatus::TrustedInput: return "TrustedInput";
  }
  return "?";
}

struct StepResult {
  std::string id;
  StepKind kind = StepKind::CompareBound;
  StepStatus status = StepStatus::Fail;
  std::string citation;
  std::string detail;
};

struct Report {
  std::string case_id;
  std::vector<StepResult> steps;

  bool passed() const {
    for (const auto& s : steps) {
      if (s.status == StepStatus::Fail) return false;
    }
    return true;
  }
  std::size_t count(StepStatus st) const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.status == st;
    return n;
  }
  const StepResult* find(const std::string& id) const {
    for (const auto& s : steps) {
      if (s.id == id) return &s;
    }
    return nullptr;
  }
};

inline nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : r.steps) {
    nlohmann::ordered_json js;
    js["id"] = s.id;
    js["status"] = to_string(s.status);
    js["citation"] = s.citation;
    js["detail"] = s.detail;
    steps.push_back(std::move(js));
  }
  nlohmann::ordered_json out;
  out["case"] = r.case_id;
  out["steps"] = std::move(steps);
  out["overall"] = r.passed() ? "Pass" : "Fail";
  return out;
}

inline std::string render_text(const Report& r) {
  std::string out = "case " + r.case_id + "\n";
  for (const auto& s : r.steps) {
    std::string tag = std::string("[") + to_string(s.status) + "]";
    tag.resize(15, ' ');
    out += "  " + tag + s.id + " (" + to_string(s.kind) + ")\n";
    out += "      claim:  " + s.citation + "\n";
    out += "      detail: " + s.detail + "\n";
  }
  out += "overall: " + std::string(r.passed() ? "Pass" : "Fail") + " (" + std::to_string(r.count(StepStatus::Pass)) +
         " pass, " + std::to_string(r.count(StepStatus::TrustedInput)) + " trusted input, " +
         std::to_string(r.count(StepStatus::Fail)) + " fail)\n";
  return out;
}

}  // namespace semistable
