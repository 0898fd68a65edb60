#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nlt/diagnostics.hpp"
#include "nlt/scheme.hpp"

namespace nlt {

/// Seeded randomized checks of the scheme's proved estimates. Each trial
/// draws a kernel, a filter size, a state on a `cells`-cell grid with values
/// in [1, 20] and a right ghost state; the trial's own seed is derived from
/// the campaign seed so any failure can be replayed alone.
struct CampaignOptions {
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  std::size_t cells = 64;
  std::size_t steps = 50;
  double safety = 0.9;
  double tol = 1e-12;
};

/// Two ordered states w >= w~ sharing a ghost, stepped together.
struct OrderedPairResults {
  CampaignResult monotonicity;
  CampaignResult l1_contraction;
  CampaignResult max_principle;
  CampaignResult tvd;
  CampaignResult time_continuity;
  CampaignResult oscillation_growth;
};

OrderedPairResults ordered_pair_campaign(const CampaignOptions& options,
                                         CflCheck check = CflCheck::Enforce);

/// Kruzkov entropy inequality with c drawn from [1, 20].
CampaignResult entropy_campaign(const CampaignOptions& options);
/// With c below every state value the inequality must hold with equality.
CampaignResult entropy_equality_campaign(const CampaignOptions& options);
/// filter(step of y) against step_w(filter(y)), tolerance 1e-10.
CampaignResult consistency_campaign(const CampaignOptions& options);
/// Harmonic-mean speed >= arithmetic-mean speed for identical weights,
/// tolerance 1e-14.
CampaignResult ftl_ordering_campaign(const CampaignOptions& options);

struct VerifyReport {
  std::vector<CampaignResult> checks;
  /// Monotonicity with safety 1.5 and the CFL check disabled; it must fail.
  CampaignResult negative_control;

  bool passed() const;
};

VerifyReport run_verify(const CampaignOptions& options);

}  // namespace nlt
