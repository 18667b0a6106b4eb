// Prints the branch values of E_m along the square T_1 as CSV, together with
// the monodromy of one loop around a_2. A minimal tour of the branch API.

#include <cstdio>

#include "wermerlab/branches.hpp"

using namespace wermerlab;

int main() {
    const EpsilonSchedule schedule = build_schedule(5);
    std::printf("re_z,im_z,re_w,im_w,branch\n");
    for (int i = 0; i < 64; ++i) {
        const double t = static_cast<double>(i) / 64.0;
        const double side = 1.5;
        cplx z;
        if (t < 0.25)
            z = cplx(side, -side + 8 * side * t);
        else if (t < 0.5)
            z = cplx(side - 8 * side * (t - 0.25), side);
        else if (t < 0.75)
            z = cplx(-side, side - 8 * side * (t - 0.5));
        else
            z = cplx(-side + 8 * side * (t - 0.75), -side);
        const auto vals = branch_values(schedule, schedule.m, z);
        for (size_t b = 0; b < vals.size(); ++b)
            std::printf("%.6f,%.6f,%.6f,%.6f,%zu\n", z.real(), z.imag(), vals[b].real(),
                        vals[b].imag(), b);
    }

    const cplx ref(0.4, 0.35);
    const BranchSignature sig = BranchSignature::all_plus(schedule.m, ref);
    const cplx a2 = spiral_point(2);
    const cplx entry = a2 + 0.25 * (ref - a2) / std::abs(ref - a2);
    ContinuationPath loop = ContinuationPath::straight(ref, entry, 8);
    loop.append(ContinuationPath::circle(a2, 0.25, 1, 128, std::arg(ref - a2)));
    loop.append(ContinuationPath::straight(entry, ref, 8));
    const BranchSignature after = monodromy(schedule, sig, loop);
    std::fprintf(stderr, "monodromy around a_2 flips sign 2: ");
    for (int s : after.signs) std::fprintf(stderr, "%+d ", s);
    std::fprintf(stderr, "\n");
    return 0;
}
