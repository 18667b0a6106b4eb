#pragma once

// The epsilon-schedule of the Wermer construction: eps_1 = 1 and, level by
// level, radii r_k in (0, 1/2), branch separations kappa_k on the circles
// |z - a_k| = r_k, and eps_k chosen under
//
//   (k-eq)  2 eps_k sqrt(r_k) < kappa_k / 2
//   (p-eq)  2 eps_k sqrt(|a_k - a_p| + r_p) < eps_p sqrt(r_p) / 2^(k-p+1)
//
// for 2 <= p < k. eps_k decays by a fixed factor per level, so deep
// schedules leave double range; log_eps/log_kappas are the authoritative
// values and the linear fields may underflow to 0 at extreme depth.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wermerlab/complex_util.hpp"
#include "wermerlab/lattice.hpp"

namespace wermerlab {

struct EpsilonSchedule {
    int m = 1;
    std::vector<double> eps;           // eps[k-1] = eps_k
    std::vector<double> log_eps;       // log eps_k (authoritative)
    std::vector<double> radii;         // radii[k-1] = r_k, k >= 2 (entry 0 unused)
    std::vector<double> kappas;        // kappas[k-1] = kappa_k, k >= 2
    std::vector<double> log_kappas;
    std::vector<std::uint8_t> kappa_sampled;  // 1 = sampled circle inf, 0 = certified lower bound
    double safety = 0.5;

    double eps_at(int k) const { return eps.at(k - 1); }
    double log_eps_at(int k) const { return log_eps.at(k - 1); }
    double radius_at(int k) const {
        if (k < 2) throw std::invalid_argument("radius_at: r_k defined for k >= 2");
        return radii.at(k - 1);
    }
    double kappa_at(int k) const {
        if (k < 2) throw std::invalid_argument("kappa_at: kappa_k defined for k >= 2");
        return kappas.at(k - 1);
    }
    double log_kappa_at(int k) const {
        if (k < 2) throw std::invalid_argument("log_kappa_at: kappa_k defined for k >= 2");
        return log_kappas.at(k - 1);
    }

    /// log(eps_p * sqrt(r_p)), the shift-error scale of level p.
    double log_shift_scale(int p) const { return log_eps_at(p) + 0.5 * std::log(radius_at(p)); }
};

struct ScheduleCert {
    bool ok = false;
    // Multiplicative margins: 1 - lhs/rhs of the sharpest (k-eq) and (p-eq)
    // instance; positive iff the strict inequality holds.
    double min_keq_margin = kInf;
    double min_peq_margin = kInf;
    long checked = 0;
    std::vector<std::string> violations;
};

/// Checks every schedule invariant in log space and reports margins.
inline ScheduleCert certify(const EpsilonSchedule& s) {
    ScheduleCert cert;
    auto fail = [&](std::string msg) { cert.violations.push_back(std::move(msg)); };

    if (s.m < 1 || static_cast<int>(s.log_eps.size()) != s.m) fail("level/size mismatch");
    if (s.m >= 1 && !s.log_eps.empty() && s.log_eps[0] != 0.0) fail("eps_1 must equal 1");
    for (int k = 2; k <= s.m && static_cast<int>(s.log_eps.size()) == s.m; ++k) {
        if (!(s.log_eps_at(k) < s.log_eps_at(k - 1)))
            fail("eps not strictly decreasing at k=" + std::to_string(k));
        const double r = s.radius_at(k);
        if (!(r > 0.0 && r < 0.5)) fail("r_k out of (0,1/2) at k=" + std::to_string(k));
        if (!(s.log_kappa_at(k) > -kInf)) fail("kappa_k not positive at k=" + std::to_string(k));

        // (k-eq): 2 eps_k sqrt(r_k) < kappa_k / 2.
        const double lhs = std::log(2.0) + s.log_eps_at(k) + 0.5 * std::log(r);
        const double rhs = s.log_kappa_at(k) - std::log(2.0);
        const double margin = 1.0 - std::exp(lhs - rhs);
        cert.min_keq_margin = std::min(cert.min_keq_margin, margin);
        if (!(lhs < rhs)) fail("(k-eq) fails at k=" + std::to_string(k));
        ++cert.checked;

        // (p-eq) against every earlier level.
        const cplx ak = spiral_point(k);
        for (int p = 2; p < k; ++p) {
            const cplx ap = spiral_point(p);
            const double lhs_p = std::log(2.0) + s.log_eps_at(k) +
                                 0.5 * std::log(std::abs(ak - ap) + s.radius_at(p));
            const double rhs_p = s.log_shift_scale(p) - (k - p + 1) * std::log(2.0);
            const double margin_p = 1.0 - std::exp(lhs_p - rhs_p);
            cert.min_peq_margin = std::min(cert.min_peq_margin, margin_p);
            if (!(lhs_p < rhs_p))
                fail("(p-eq) fails at k=" + std::to_string(k) + ", p=" + std::to_string(p));
            ++cert.checked;
        }
    }
    cert.ok = cert.violations.empty();
    return cert;
}

}  // namespace wermerlab
