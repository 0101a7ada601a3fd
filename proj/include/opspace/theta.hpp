#pragma once

namespace opspace {

// Exponents attached to an interpolation parameter theta in [0,1].
// p = 1/(1-theta), p' = 1/theta (infinite at the endpoints) and
// c = 1/(theta^theta (1-theta)^(1-theta)), which is 1 at both endpoints and 2 at 1/2.
struct ThetaParams {
    double theta = 0.5;
    double p = 2.0;
    double p_prime = 2.0;
    double c_theta = 2.0;

    static ThetaParams make(double theta);
};

}  // namespace opspace
