// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cstdio>

#include "fbns/verification.hpp"

int main() {
    const fbns::VerifyReport rep = fbns::run_verification_suite();
    for (const fbns::CheckResult& c : rep.checks)
        std::printf("%s\n", fbns::format_check_line(c).c_str());
    std::printf("%zu/%zu criteria passed\n",
                static_cast<std::size_t>(
                    std::count_if(rep.checks.begin(), rep.checks.end(),
                                  [](const fbns::CheckResult& c) { return c.pass; })),
                rep.checks.size());
    return rep.all_pass() ? 0 : 1;
}
