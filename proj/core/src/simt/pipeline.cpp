#include "warpsim/simt/pipeline.hpp"

namespace warpsim::simt {

unsigned issue_cost(unsigned active_lanes, unsigned warp_size, unsigned simd_width, IssueRule rule)
{
    if (rule == IssueRule::Simd) return warp_size / simd_width;
    return (active_lanes + simd_width - 1) / simd_width;
}

} // namespace warpsim::simt
