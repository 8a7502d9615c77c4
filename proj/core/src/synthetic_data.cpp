#include "relnas/synthetic_data.hpp"

#include <cmath>
#include <stdexcept>

#include "relnas/rng.hpp"

namespace relnas {

ToyDataset make_blobs(int samples, int classes, int dim, double separation, double spread,
                      std::uint64_t seed) {
    if (classes < 2 || dim < 1 || samples < classes) {
        throw std::invalid_argument("make_blobs: bad dimensions");
    }
    Rng rng = make_rng(derive_seed(seed, "blobs"));
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd centers(classes, dim);
    for (int c = 0; c < classes; ++c) {
        Eigen::VectorXd dir(dim);
        for (int d = 0; d < dim; ++d) dir(d) = gauss(rng);
        centers.row(c) = separation * dir.normalized().transpose();
    }

    ToyDataset data;
    data.classes = classes;
    data.inputs.resize(samples, dim);
    data.labels.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const int c = i % classes;
        data.labels[i] = c;
        for (int d = 0; d < dim; ++d) {
            data.inputs(i, d) = centers(c, d) + spread * gauss(rng);
        }
    }
    return data;
}

ToyDataset make_rings(int samples, int classes, int dim, double spread, std::uint64_t seed) {
    if (classes < 2 || dim < 2 || samples < classes) {
        throw std::invalid_argument("make_rings: bad dimensions");
    }
    Rng rng = make_rng(derive_seed(seed, "rings"));
    std::normal_distribution<double> gauss(0.0, 1.0);

    ToyDataset data;
    data.classes = classes;
    data.inputs.resize(samples, dim);
    data.labels.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const int c = i % classes;
        data.labels[i] = c;
        const double angle = 2.0 * M_PI * uniform_real(rng);
        const double radius = (c + 1.0) + spread * gauss(rng);
        data.inputs(i, 0) = radius * std::cos(angle);
        data.inputs(i, 1) = radius * std::sin(angle);
        for (int d = 2; d < dim; ++d) data.inputs(i, d) = 0.1 * gauss(rng);
    }
    return data;
}

}  // namespace relnas
