// Acceptance suite: runs every builtin criterion scenario at its pinned
// parameters and tolerances and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "innerlim/scenario.hpp"

int main() {
    using innerlim::scenarios::Report;
    const std::vector<std::pair<int, std::string>> criteria = {
        {1, "gold-foils-volume"},
        {2, "gold-foils-divergence"},
        {3, "many-splines-packing"},
        {4, "many-splines-inner-limit"},
        {5, "restricted-vs-intrinsic"},
        {6, "gh-oracle-sandwich"},
        {7, "chain-counting"},
        {8, "glued-annulus-tower"},
        {9, "book-ball-pathology"},
        {10, "glued-nonuniqueness"},
        {11, "inner-union-vs-gh-limit"},
        {12, "lemma-suites"},
    };

    int failed = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [num, name] : criteria) {
        bool ok = false;
        std::string detail;
        double secs = 0.0;
        try {
            const Report rep = innerlim::scenarios::run_builtin(name, 0);
            ok = rep.pass();
            secs = rep.elapsed_seconds;
            for (const auto& s : rep.steps)
                if (!s.pass) detail += (detail.empty() ? "" : "; ") + s.name;
        } catch (const std::exception& e) {
            detail = e.what();
        }
        if (!ok) ++failed;
        std::printf("[%s] criterion %2d %-28s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", num,
                    name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failed,
                criteria.size(), total);
    return failed == 0 ? 0 : 1;
}
