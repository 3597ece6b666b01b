#include "bicausal/ambient.hpp"

namespace bicausal {

Vec3 Ambient::frame_components(const VecX& p, const VecX& v) const {
    const MatX F = frame(p);
    if (F.rows() == 3) return Mat3(F).lu().solve(Vec3(v));
    return (F.transpose() * F).ldlt().solve(F.transpose() * v);
}

static Vec3 as3(const VecX& p) {
    if (p.size() != 3) throw Error(ErrorCode::MODEL_MISMATCH, "coordinate model expects points in R^3");
    return Vec3(p);
}

void CoordinateAmbient::check_point(const VecX& p) const { check_domain(prm_, as3(p)); }

MatX CoordinateAmbient::frame(const VecX& p) const { return frame_matrix(prm_, as3(p)); }

ConnectionTable CoordinateAmbient::table(Signature s, const VecX& p) const {
    return connection_table(prm_, s, as3(p));
}

MatX CoordinateAmbient::metric(Signature s, const VecX& p) const { return coordinate_metric(prm_, s, as3(p)); }

}  // namespace bicausal
