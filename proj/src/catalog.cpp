#include "bakry/scenario.hpp"

namespace bakry {

namespace {

const char* const kFlatInterval = R"scn(# Unit interval, flat metric, no weight. Ric_h vanishes, so Theorem-type
# checks report unmet hypotheses; the identities still hold exactly.
[scenario]
id = "flat_interval"
description = "Unit interval with the flat metric and constant weight"

[manifold]
dim = 1
x1.range = [0, 1]
metric = ["1"]
weight = "0"

[mesh]
cells = [500]
levels = 3

[params]
c = 1
m = 2

[checks]
run = [thm1, bochner, hessian_bound, reilly]
thm1.bc = dirichlet
bochner.f = ["sin(3*x1) + x1^3", "exp(x1)*cos(2*x1)"]
hessian_bound.f = ["sin(3*x1) + x1^3", "x1^4 - x1"]
reilly.f = ["sin(pi*x1)", "sin(3*x1) + x1^3", "exp(x1)"]
reilly.cells = [64]
)scn";

const char* const kGaussianInterval = R"scn(# [-1, 1] with the Gaussian weight. Hermite polynomials give
# lambda_D = 2 (x^2 - 1) and lambda_N = 3 (x^3 - 3x).
[scenario]
id = "gaussian_interval"
description = "Gaussian interval [-1, 1], h = x^2/2"

[manifold]
dim = 1
x1.range = [-1, 1]
metric = ["1"]
weight = "x1^2/2"

[mesh]
cells = [250]
levels = 3

[params]
c = 0.5
m = 3
a = 0.5

[checks]
run = [thm1, madu, bochner, hessian_bound]
thm1.bc = neumann
madu.bc = dirichlet
bochner.f = ["x1", "x1^2 - 1", "sin(2*x1)"]
hessian_bound.f = ["x1^2", "x1^3 - 3*x1", "exp(x1)"]
)scn";

const char* const kGaussianDisk = R"scn(# Unit disk in polar coordinates with h = r^2/2.
[scenario]
id = "gaussian_disk"
description = "Gaussian unit disk, polar chart"

[manifold]
dim = 2
x1.range = [0, 1]
x1.ends = [singular, boundary]
x2.range = [0, "2*pi"]
x2.periodic = true
metric = ["1", "0", "x1^2"]
weight = "x1^2/2"

[mesh]
cells = [100]
levels = 3
axisymmetric = true
fourier_modes = 2

[params]
c = 0.5
m = 4
a = 0.5

[checks]
run = [thm1, madu, bochner, reilly]
thm1.bc = dirichlet
madu.bc = dirichlet
bochner.f = ["x1^2*cos(2*x2)", "x1^3*sin(x2) + x1^2"]
reilly.f = ["x1^2*cos(2*x2)", "x1*cos(x2) + x1^2", "x1^3*sin(x2)"]
reilly.cells = [32, 32]
)scn";

const char* const kHemisphere = R"scn(# Upper unit hemisphere, colatitude and longitude. The first Dirichlet
# eigenfunction is cos(theta) with eigenvalue 2.
[scenario]
id = "hemisphere_dirichlet"
description = "Unit hemisphere, Dirichlet on the equator"

[manifold]
dim = 2
x1.range = [0, "pi/2"]
x1.ends = [singular, boundary]
x2.range = [0, "2*pi"]
x2.periodic = true
metric = ["1", "0", "sin(x1)^2"]
weight = "0"

[mesh]
cells = [100]
levels = 3
axisymmetric = true
fourier_modes = 2

[params]
c = 1
m = 3
a = 1

[checks]
run = [thm1, madu, corollary]
thm1.bc = dirichlet
madu.bc = dirichlet
corollary.bc = dirichlet
)scn";

const char* const kSphereBand = R"scn(# Band of the unit sphere between colatitudes pi/4 and 3pi/4. Its
# boundary circles curve away from the band, so convexity fails.
[scenario]
id = "sphere_band_neumann"
description = "Unit sphere band, Neumann"

[manifold]
dim = 2
x1.range = ["pi/4", "3*pi/4"]
x2.range = [0, "2*pi"]
x2.periodic = true
metric = ["1", "0", "sin(x1)^2"]
weight = "0"

[mesh]
cells = [100]
levels = 3
axisymmetric = true
fourier_modes = 3

[params]
c = 1

[checks]
run = [thm1, corollary]
thm1.bc = neumann
corollary.bc = neumann
)scn";

const char* const kShrinkerSphere = R"scn(# Round sphere of radius sqrt(2) in R^3 with hbar = |x|^2/2: the
# Gaussian self-shrinker sphere.
[scenario]
id = "shrinker_sphere"
description = "Self-shrinker sphere of radius sqrt(2)"

[immersion]
x1.range = [0, "pi"]
x1.ends = [singular, singular]
x2.range = [0, "2*pi"]
x2.periodic = true
map = ["sqrt(2)*sin(x1)*cos(x2)", "sqrt(2)*sin(x1)*sin(x2)", "sqrt(2)*cos(x1)"]
ambient_weight = "(x1^2 + x2^2 + x3^2)/2"
orientation = plus
shape_sign = 1

[mesh]
cells = [200]
levels = 3
axisymmetric = true
fourier_modes = 2

[params]
c = 0.5

[checks]
run = [h_minimality, stability, prop25, thm2]
h_minimality.f = ["sin(x1)*cos(x2) + cos(x1)^2"]
prop25.f = ["1", "cos(x1)", "sin(x1)*cos(x2) + cos(x1)^2", "exp(sin(x1)*sin(x2))"]
)scn";

const char* const kPlaneDisk = R"scn(# Unit disk in the plane x3 = 0 with hbar = |x|^2/2.
[scenario]
id = "gaussian_plane_disk"
description = "Flat unit disk in a Gaussian R^3"

[immersion]
x1.range = [0, 1]
x1.ends = [singular, boundary]
x2.range = [0, "2*pi"]
x2.periodic = true
map = ["x1*cos(x2)", "x1*sin(x2)", "0"]
ambient_weight = "(x1^2 + x2^2 + x3^2)/2"
orientation = plus

[mesh]
cells = [100]
levels = 3
axisymmetric = true
fourier_modes = 2

[params]
c = 0.5

[checks]
run = [h_minimality, stability, thm2]
)scn";

const char* const kCylinder = R"scn(# Unit cylinder of height 2, outward normal, no weight.
[scenario]
id = "cylinder_segment"
description = "Unit cylinder segment, height 2"

[immersion]
x1.range = [0, 2]
x2.range = [0, "2*pi"]
x2.periodic = true
map = ["cos(x2)", "sin(x2)", "x1"]
ambient_weight = "0"
orientation = minus

[mesh]
cells = [100]
levels = 3
axisymmetric = true
fourier_modes = 2

[checks]
run = [h_minimality, stability, splitting]
splitting.f = ["x1*x3 + sin(x2)", "x1^2 + x2^2 - 2*x3^2", "exp(x3)*x1"]
)scn";

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"flat_interval", kFlatInterval},     {"gaussian_interval", kGaussianInterval},
      {"gaussian_disk", kGaussianDisk},     {"hemisphere_dirichlet", kHemisphere},
      {"sphere_band_neumann", kSphereBand}, {"shrinker_sphere", kShrinkerSphere},
      {"gaussian_plane_disk", kPlaneDisk},  {"cylinder_segment", kCylinder},
  };
  return entries;
}

}  // namespace bakry
