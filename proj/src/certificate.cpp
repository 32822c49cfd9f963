#include "conelab/certificate.hpp"

#include <algorithm>
#include <cstdio>

namespace conelab {

bool CertificateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CertCheck& c) { return c.pass; });
}

const CertCheck* CertificateReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

double CertificateReport::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) w = std::min(w, c.margin);
  return checks.empty() ? 0.0 : w;
}

void CertificateReport::add(std::string id, bool pass, double margin,
                            std::string location, std::string note) {
  checks.push_back({std::move(id), pass, margin, std::move(location), std::move(note)});
}

void CertificateReport::add_margin(std::string id, double margin,
                                   std::string location, std::string note) {
  add(std::move(id), margin >= 0.0, margin, std::move(location), std::move(note));
}

nlohmann::json CertificateReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["pass"] = all_pass();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"id", c.id},
                   {"pass", c.pass},
                   {"worst_margin", c.margin},
                   {"location", c.location},
                   {"note", c.note}});
  }
  j["checks"] = arr;
  return j;
}

void CertificateReport::print(std::FILE* out) const {
  std::fprintf(out, "[%s] %s\n", all_pass() ? "PASS" : "FAIL", name.c_str());
  for (const auto& c : checks)
    std::fprintf(out, "  %-44s %s  margin=%.6g  %s\n", c.id.c_str(),
                 c.pass ? "pass" : "FAIL", c.margin, c.location.c_str());
}

const std::vector<std::string>& certificate_registry() {
  static const std::vector<std::string> reg = {
      "profile.exponent",        "profile.properties",
      "profile.supersolution",   "profile.ordering",
      "gap.smallness",           "gap.comparison",
      "barrier.supersolution",   "barrier.gap-bound",
      "barrier.constants",       "solve.boundary-data",
      "solve.ordering",          "solve.graph-bound",
      "solve.ratio",             "solve.gradient-conditions",
      "solve.eigenvalue",        "solve.c2-closeness",
      "solve.derivative-decay",  "glue.limit-ladder",
      "glue.properties",         "metric.transition",
      "metric.tail",             "metric.minimality",
  };
  return reg;
}

bool registry_has(const std::string& tag) {
  const auto& reg = certificate_registry();
  return std::find(reg.begin(), reg.end(), tag) != reg.end();
}

void CertificateLedger::add(const CertificateReport& report, const std::string& tag,
                            double runtime_s) {
  if (!registry_has(tag))
    throw std::invalid_argument("unknown certificate registry tag: " + tag);
  std::string loc;
  double worst = report.worst_margin();
  for (const auto& c : report.checks)
    if (c.margin == worst) {
      loc = c.location;
      break;
    }
  entries_.push_back({report.name, tag, report.all_pass(), worst, loc, runtime_s});
}

bool CertificateLedger::all_pass() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const LedgerEntry& e) { return e.pass; });
}

nlohmann::json CertificateLedger::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& e : entries_)
    arr.push_back({{"certificate", e.certificate},
                   {"tag", e.tag},
                   {"pass", e.pass},
                   {"worst_margin", e.worst_margin},
                   {"location", e.location},
                   {"runtime_s", e.runtime_s}});
  return {{"all_pass", all_pass()}, {"entries", arr}};
}

void CertificateLedger::print(std::FILE* out) const {
  for (const auto& e : entries_)
    std::fprintf(out, "%-28s %-24s %s  worst=%.6g  %s\n", e.certificate.c_str(),
                 e.tag.c_str(), e.pass ? "pass" : "FAIL", e.worst_margin,
                 e.location.c_str());
  std::fprintf(out, "ledger: %s\n", all_pass() ? "ALL PASS" : "FAILURES PRESENT");
}

}  // namespace conelab
