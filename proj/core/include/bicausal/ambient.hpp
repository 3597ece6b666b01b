#pragma once

// Ambient model seen by the surface engine: points live in R^n (n = 3 for the coordinate model,
// n = 4 for the group models in C^2), and each point carries the frame (E1, E2, E3 = xi).

#include <string>

#include "bicausal/space.hpp"

namespace bicausal {

class Ambient {
public:
    virtual ~Ambient() = default;

    virtual int dim() const = 0;
    virtual const SpaceParams& params() const = 0;
    virtual std::string name() const = 0;
    // Throws DOMAIN_VIOLATION (or MODEL_MISMATCH) when p is not an admissible point.
    virtual void check_point(const VecX& p) const = 0;
    // dim x 3, columns E1, E2, E3.
    virtual MatX frame(const VecX& p) const = 0;
    virtual ConnectionTable table(Signature s, const VecX& p) const = 0;
    // Metric as a dim x dim matrix in ambient coordinates (an extension off the model manifold
    // for the group models). Used by the independent checks, never by the frame pipeline.
    virtual MatX metric(Signature s, const VecX& p) const = 0;

    // Frame components of an ambient vector at p (least squares for dim 4).
    Vec3 frame_components(const VecX& p, const VecX& v) const;
    VecX to_ambient(const VecX& p, const Vec3& f) const { return frame(p) * f; }
};

class CoordinateAmbient final : public Ambient {
public:
    explicit CoordinateAmbient(const SpaceParams& prm) : prm_(prm) {}

    int dim() const override { return 3; }
    const SpaceParams& params() const override { return prm_; }
    std::string name() const override { return "coordinate"; }
    void check_point(const VecX& p) const override;
    MatX frame(const VecX& p) const override;
    ConnectionTable table(Signature s, const VecX& p) const override;
    MatX metric(Signature s, const VecX& p) const override;

private:
    SpaceParams prm_;
};

}  // namespace bicausal
