#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deft::verify {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed error for the property's metric
  double limit = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// Negative-control fixture: perturbs one QR result inside the
  /// determinism property so the suite must report a failure.
  bool perturb_qr_sign = false;
  /// Upper bound for the FFT-vs-naive-DFT length scan.
  int fft_max_n = 1024;
};

std::vector<PropertyResult> run_all_properties(const VerifyOptions& opts = {});

bool all_pass(const std::vector<PropertyResult>& results);
void print_report(std::ostream& out, const std::vector<PropertyResult>& results);
void write_report_json(std::ostream& out, const std::vector<PropertyResult>& results);

}  // namespace deft::verify
