#include "opspace/theta.hpp"

#include "opspace/matrix_core.hpp"

#include <cmath>

namespace opspace {

ThetaParams ThetaParams::make(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0,1]");
    ThetaParams t;
    t.theta = theta;
    t.p = theta == 1.0 ? kInf : 1.0 / (1.0 - theta);
    t.p_prime = theta == 0.0 ? kInf : 1.0 / theta;
    // x^x -> 1 as x -> 0
    const double a = theta == 0.0 ? 1.0 : std::pow(theta, theta);
    const double b = theta == 1.0 ? 1.0 : std::pow(1.0 - theta, 1.0 - theta);
    t.c_theta = 1.0 / (a * b);
    return t;
}

}  // namespace opspace
