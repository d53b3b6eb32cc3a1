#include <chrono>
#include <cstdio>

#include "segcert/io.hpp"
#include "segcert/reference.hpp"

using namespace segcert;

int main() {
    for (const auto& cfg : reference::configs()) {
        const Problem problem = reference::problem_for(cfg);
        const auto t0 = std::chrono::steady_clock::now();
        auto [seg, report] = refine(problem, reference::kModes, reference::refine_options_for(cfg));
        const auto ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0).count();
        const double u1 = seg.boxes[0].r.hi;
        const double u1ref = from_decimal(cfg.u_r[0]).hi;
        const double Cref = from_decimal(cfg.C).hi;
        std::printf("%-12s pass=%d s=%d u1r=%.6g (%+.2f%%) C=%.6g (%+.2f%%)  [%.1f ms]\n",
                    cfg.name, report.passed ? 1 : 0, seg.s, u1,
                    (u1 - u1ref) / u1ref * 100.0, seg.C.hi,
                    (seg.C.hi - Cref) / Cref * 100.0, ms);

        // published segment: verify + norms
        const Segment pub = reference::published_segment(cfg);
        const auto prep = verify(pub, problem);
        const auto nb = norm_bounds(pub, problem);
        std::printf("   published: pass=%d  l2u=%.8f (ref %s)  c0u=%.8f (ref %s)\n",
                    prep.passed ? 1 : 0, nb.table.l2_u.hi, cfg.l2_u, nb.table.c0_u.hi, cfg.c0_u);
    }
    return 0;
}
