// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each criterion runs the corresponding named replication fixture at its
// pinned parameters and prints PASS/FAIL plus a short summary.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "fairdiv/replicate.hpp"

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> fixture_ids;
};

}  // namespace

int main() {
    using fairdiv::ReplicationOptions;
    using fairdiv::ReplicationResult;

    const std::vector<Criterion> criteria = {
        {"1 efficiency separations (exact witnesses)", {"appendixC-separations"}},
        {"2 positional interim structure + monotonicity", {"lemma-positional"}},
        {"3 exact ordinal BIC of round-robin-with-pass", {"lemma-rr-bic"}},
        {"4 EF1 + SD+ efficiency property sweep", {"thm-rr-fairness"}},
        {"5 dictatorship characterization search", {"thm-characterization"}},
        {"6 welfare-maximizer manipulation gain (MC)", {"thm-welfare-bic"}},
        {"7 unique fPO-and-fulfilling allocation", {"thm-fpo-fulfilling"}},
        {"8 cake suite (splits, arrivals, incentives)",
         {"lemma-expected-share", "cake-suite"}},
        {"9 order-neutrality chi-square tests", {"neutrality"}},
    };

    ReplicationOptions opts;  // pinned defaults: seed, 10^6 samples, node budget

    int failures = 0;
    for (const auto& c : criteria) {
        bool pass = true;
        std::string note;
        const auto start = std::chrono::steady_clock::now();
        for (const auto& id : c.fixture_ids) {
            try {
                ReplicationResult r = fairdiv::run_replication(id, opts);
                pass = pass && r.pass;
                if (!r.pass) note += " " + id + ": " + r.details.dump();
            } catch (const std::exception& e) {
                pass = false;
                note += " " + id + ": exception: " + e.what();
            }
        }
        const auto secs = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count() /
                          1000.0;
        std::printf("%s  criterion %s  (%.1fs)%s\n", pass ? "PASS" : "FAIL",
                    c.label.c_str(), secs, note.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    if (failures == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("%d criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
