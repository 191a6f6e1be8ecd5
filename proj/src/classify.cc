#include "qtangle/classify.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace qtangle {

void ClassifierConfig::validate() const {
    if (!(epsilon > 0 && epsilon < 1e-2)) {
        throw std::invalid_argument(fmt::format("classifier epsilon {} must lie in (0, 1e-2)", epsilon));
    }
}

Classification classify_vector(const EntanglementVector &v, const ClassifierConfig &cfg) {
    cfg.validate();
    double eps = cfg.epsilon;
    bool zero_a = v.e_ii < eps;
    bool zero_b = v.e_iii < eps;
    bool zero_c = v.e_iv < eps;
    int z = zero_a + zero_b + zero_c;

    double margin = 1;
    for (double x : v.values()) {
        margin = std::min(margin, std::abs(x - eps));
    }

    SloccClass cls;
    switch (z) {
        case 3:
            cls = SloccClass::I;
            break;
        case 1:
            cls = zero_a ? SloccClass::II : zero_b ? SloccClass::III : SloccClass::IV;
            break;
        case 0:
            cls = v.e_v >= eps ? SloccClass::V : SloccClass::VI;
            break;
        default:
            throw ClassificationInconsistency(
                fmt::format("two cut concurrences vanish but the third does not: ({:.3g}, {:.3g}, {:.3g})", v.e_ii,
                            v.e_iii, v.e_iv),
                v);
    }
    return {cls, v, margin};
}

Classification classify(const PureTripartiteState &psi, const ClassifierConfig &cfg) {
    cfg.validate();
    return classify_vector(entanglement_vector(psi), cfg);
}

}  // namespace qtangle
