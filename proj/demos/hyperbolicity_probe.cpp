// Probes the hyperbolicity machinery on the rigid domain with a flat
// profile: Kobayashi brackets at a point of E_m x {1}, a harmonic-measure
// sanity estimate, and the large-disk exclusion radii r(d).

#include <cstdio>

#include "wermerlab/disks.hpp"
#include "wermerlab/harmonic.hpp"
#include "wermerlab/kobayashi.hpp"

using namespace wermerlab;

int main() {
    DomainParams params;
    params.schedule = build_schedule(6);
    params.level = 6;
    params.profile = zero_profile();

    const cplx z0(0.4, 0.3);
    const cplx w0 = branch_values(params.schedule, params.level, z0)[0];
    const Point3 pt{z0, w0, cplx(1.0, 0.0)};
    const Point3 dir{cplx(0, 0), cplx(0, 0), cplx(1, 0)};
    auto inside = [&](const Point3& q) { return omega_contains(params, q[0], q[1], q[2]); };

    const double lower = kobayashi_lower_projection(params, pt, dir);
    FamilySpec fam;
    fam.trials = 12;
    const UpperEstimate upper = kobayashi_upper(inside, pt, dir, 3, fam, 7);
    std::printf("kobayashi at E x {1} along zeta: %.6f <= k <= %.6f (disk: %s)\n", lower,
                upper.value, upper.best_label.c_str());

    SlitDiskDomain disk{1.0, {}};
    const auto hm = harmonic_measure(disk, circle_arc(0.0, 3.141592653589793), 0.0, 50000, 3);
    std::printf("half-circle harmonic measure at 0: %.4f +- %.4f\n", hm.value, hm.stderr_);

    for (double d : {0.5, 1.0, 2.0}) {
        const ExclusionReport rep = disk_exclusion_search(params, d, 11, {.trials = 24});
        std::printf("exclusion proxy r(%.1f) = %.4f (tube escapes %ld, frame growth %ld)\n",
                    d, rep.best_radius, rep.tube_escapes, rep.frame_growth);
    }
    return 0;
}
