#pragma once

namespace catinf {

// zero: threshold below which a mass or a normalizer counts as zero.
// channel: largest admissible |row sum - 1| for a channel.
struct Tolerances {
  double zero = 1e-12;
  double channel = 1e-9;
};

}  // namespace catinf
