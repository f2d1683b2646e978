#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fairdiv {

// Named verification fixtures bundling the headline claims into runnable
// checks.  Each fixture returns a machine-readable verdict report; the CLI
// `replicate <id>` subcommand and the acceptance runner both call these.

struct ReplicationOptions {
    std::uint64_t seed = 1;
    std::uint64_t samples = 1'000'000;        // Monte Carlo fixtures only
    std::uint64_t node_budget = 10'000'000;   // characterization search only
};

struct ReplicationResult {
    std::string id;
    bool pass = false;
    nlohmann::json details;  // embeds the parameters needed to reproduce
};

// All known fixture ids, in the order the acceptance runner executes them:
//   appendixC-separations  exact efficiency-notion separations (two instances)
//   lemma-positional       rank-only interim structure + monotonicity
//   lemma-rr-bic           exact truthfulness-in-expectation audits
//   thm-rr-fairness        EF1 + SD+ efficiency property sweep
//   thm-characterization   dictatorship characterization searches
//   thm-welfare-bic        welfare-maximizer manipulation gain (Monte Carlo)
//   thm-fpo-fulfilling     unique fPO-and-fulfilling allocation sweep
//   lemma-expected-share   crumb-removal expected-share identity
//   cake-suite             split/arrival-protocol/audit bundle
//   neutrality             chi-square order-neutrality tests
const std::vector<std::string>& replication_ids();

// Runs one fixture.  Throws ConfigError for an unknown id.
ReplicationResult run_replication(const std::string& id,
                                  const ReplicationOptions& opts = {});

}  // namespace fairdiv
