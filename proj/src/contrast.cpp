#include "fedi/contrast.hpp"

#include <cmath>

namespace fedi {

void validate(const HardwareParams& hp) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(std::string(name) + " must be finite and > 0");
        }
    };
    positive(hp.kappa_n, "kappa_n");
    positive(hp.kappa_p, "kappa_p");
    positive(hp.cap_c1, "cap_c1");
    positive(hp.cap_c2, "cap_c2");
    positive(hp.i_d, "i_d");
    positive(hp.i_on, "i_on");
    positive(hp.i_off, "i_off");
    if (hp.kappa_n > 1.0 || hp.kappa_p > 1.0) {
        throw Error("back gate coefficients must be in (0, 1]");
    }
}

ContrastParams contrast_from_hardware(const HardwareParams& hp) {
    validate(hp);
    if (hp.i_on <= hp.i_d) {
        throw Error("i_on must exceed i_d, otherwise c_on would not be positive");
    }
    if (hp.i_off >= hp.i_d) {
        throw Error("i_off must be below i_d, otherwise c_off would not be negative");
    }
    const double alpha =
        (hp.kappa_n * hp.cap_c2) / (hp.kappa_p * hp.kappa_p * hp.cap_c1);
    ContrastParams cp;
    cp.c_on = alpha * std::log(hp.i_on / hp.i_d);
    cp.c_off = alpha * std::log(hp.i_off / hp.i_d);
    validate(cp);
    return cp;
}

ContrastParams symmetric_contrast(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error("symmetric contrast must be finite and > 0");
    }
    return ContrastParams{c, -c};
}

}  // namespace fedi
