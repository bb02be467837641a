// One PASS/FAIL line per acceptance criterion. An optional argument keeps
// only criteria whose name contains it. Exit status 1 if any selected
// criterion fails.
#include <cstdio>
#include <string>

#include "cdh/cli/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const auto results = cdh::cli::run_acceptance(filter);
    if (results.empty()) {
        std::fprintf(stderr, "no criterion matches '%s'\n", filter.c_str());
        return 2;
    }
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s\n", cdh::cli::format_result(r).c_str());
        failed += r.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
