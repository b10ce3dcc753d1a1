// Acceptance suite runner: one PASS/FAIL line per criterion. With arguments,
// runs only the named criteria (e.g. `bec2_acceptance AC-3 AC-7`).

#include "bec2/verify.hpp"

#include <cstdio>
#include <set>
#include <string>

int main(int argc, char** argv)
{
    std::set<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    int ran = 0;
    for (const auto& check : bec2::acceptance_checks())
    {
        if (!wanted.empty() && !wanted.count(check.id))
            continue;
        ++ran;
        bec2::CheckResult r;
        try
        {
            r = check.run({});
        }
        catch (const std::exception& e)
        {
            r = {check.id, check.name, false, 0.0, 0.0, std::string("threw: ") + e.what(), 0.0};
        }
        if (!r.passed)
            ++failures;
        std::printf("%-5s %-6s %-40s measured=%-12.6g threshold=%-10.3g %s\n", r.id.c_str(),
                    r.passed ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.threshold, r.detail.c_str());
        std::fflush(stdout);
    }
    if (ran == 0)
    {
        std::fprintf(stderr, "no acceptance criterion matched\n");
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
