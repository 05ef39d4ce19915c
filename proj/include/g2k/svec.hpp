#ifndef G2K_SVEC_HPP
#define G2K_SVEC_HPP

#include "g2k/quadrature.hpp"

namespace g2k {

using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;

/// Values and first partials of (S, S22, S12, S11) at a point.
struct SVec {
    Vec4c s = Vec4c::Zero();
    Vec4c ds1 = Vec4c::Zero();
    Vec4c ds2 = Vec4c::Zero();
};

}  // namespace g2k

#endif
