#ifndef CONELAB_CERTIFICATE_HPP
#define CONELAB_CERTIFICATE_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace conelab {

/// One machine-checked inequality. `margin` is the signed slack of the
/// inequality in its natural units: >= 0 means it holds with that much room,
/// < 0 means it fails by that much. `location` pins the worst point.
struct CertCheck {
  std::string id;
  bool pass = false;
  double margin = 0.0;
  std::string location;
  std::string note;
};

struct CertificateReport {
  std::string name;
  std::vector<CertCheck> checks;

  bool all_pass() const;
  const CertCheck* find(const std::string& id) const;
  /// Worst (most negative) margin over all checks.
  double worst_margin() const;
  nlohmann::json to_json() const;
  void print(std::FILE* out) const;

  void add(std::string id, bool pass, double margin, std::string location = "",
           std::string note = "");
  /// Convenience: pass iff margin >= 0.
  void add_margin(std::string id, double margin, std::string location = "",
                  std::string note = "");
};

/// Fixed registry tag for a certificate family. Every ledger entry carries
/// exactly one registry tag; the set is closed so reports stay comparable
/// across runs.
const std::vector<std::string>& certificate_registry();
bool registry_has(const std::string& tag);

struct LedgerEntry {
  std::string certificate;  // report name
  std::string tag;          // registry tag
  bool pass = false;
  double worst_margin = 0.0;
  std::string location;
  double runtime_s = 0.0;
};

class CertificateLedger {
 public:
  void add(const CertificateReport& report, const std::string& tag, double runtime_s);
  bool all_pass() const;
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  nlohmann::json to_json() const;
  void print(std::FILE* out) const;

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace conelab

#endif
