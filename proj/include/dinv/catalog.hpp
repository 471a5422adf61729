#pragma once

#include <string>
#include <vector>

#include "dinv/applications.hpp"

namespace dinv {

/// Built-in manifold catalog. Grammar:
///   sphere:n[:r], rp:n, hypercylinder:p:q, clifford-torus, catenoid,
///   whitney:n, warped-s2, flat-torus
ManifoldRecord resolve_catalog(const std::string& name);

std::vector<std::string> catalog_names();

/// Stereographic-chart immersion of S^n(r) in E^{n+1}.
ImmersionField sphere_immersion(int n, double r = 1.0);

/// Angle-chart metric of S^n(r); full_last_angle false halves the final
/// angle range (the RP^n chart).
MetricField sphere_metric(int n, double r = 1.0, bool full_last_angle = true);

double sphere_volume(int n, double r = 1.0);

}  // namespace dinv
