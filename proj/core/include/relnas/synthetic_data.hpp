#pragma once

#include <cstdint>

#include "relnas/masked_mlp.hpp"

namespace relnas {

/// Gaussian class clusters: class centers drawn on a sphere of radius
/// `separation`, samples spread with unit-free `spread` around them.
ToyDataset make_blobs(int samples, int classes, int dim, double separation, double spread,
                      std::uint64_t seed);

/// Concentric rings in the first two dimensions (class c at radius c+1),
/// remaining dimensions carry small Gaussian noise. Not linearly separable.
ToyDataset make_rings(int samples, int classes, int dim, double spread, std::uint64_t seed);

}  // namespace relnas
