#pragma once

#include "fedi/core.hpp"

namespace fedi {

// DVS pixel-circuit parameters from which the contrast thresholds follow in
// closed form. Capacitances may be given in any unit: only the C2/C1 ratio
// enters the formula. Bias currents may likewise be pre-divided ratios, since
// only i_on/i_d and i_off/i_d matter.
struct HardwareParams {
    double kappa_n = 0.0;  // back gate coefficient, n FET
    double kappa_p = 0.0;  // back gate coefficient, p FET
    double cap_c1 = 0.0;
    double cap_c2 = 0.0;
    double i_d = 0.0;
    double i_on = 0.0;
    double i_off = 0.0;
};

void validate(const HardwareParams& hp);

// c_on = (kappa_n * C2) / (kappa_p^2 * C1) * ln(i_on / i_d), and likewise
// c_off with i_off. Requires i_on > i_d > i_off so the signs come out right.
ContrastParams contrast_from_hardware(const HardwareParams& hp);

// Single-contrast model: {c, -c}.
ContrastParams symmetric_contrast(double c);

}  // namespace fedi
