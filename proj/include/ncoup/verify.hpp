#pragma once

// Built-in oracle suite behind `ncoup verify`.

#include <string>
#include <vector>

namespace ncoup {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const;
};

VerifyReport run_verification();

}  // namespace ncoup
