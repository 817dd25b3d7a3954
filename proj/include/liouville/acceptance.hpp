#pragma once

#include <string>
#include <vector>

namespace liouville {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    bool quick = false;
    int threads = 1;
    std::string golden_path;  ///< empty: default location
    std::vector<int> only;    ///< empty: every criterion (or the quick subset)
};

std::vector<int> quick_subset();
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::string format_result(const CriterionResult& r);

}  // namespace liouville
