#pragma once

#include <stdexcept>
#include <string>

#include "qtangle/measures.h"
#include "qtangle/states.h"

namespace qtangle {

struct ClassifierConfig {
    /// Entanglement-vector entries below this count as zero. Must lie in (0, 1e-2).
    double epsilon = 1e-7;

    void validate() const;
};

struct Classification {
    SloccClass cls;
    EntanglementVector vector;
    /// Smallest distance of any entry from epsilon; small values mean the call was borderline.
    double margin = 0;
};

/// Exactly two vanishing cut concurrences: impossible for a normalized pure state.
class ClassificationInconsistency : public std::runtime_error {
   public:
    ClassificationInconsistency(const std::string &what, EntanglementVector v) : std::runtime_error(what), vector(v) {}
    EntanglementVector vector;
};

Classification classify(const PureTripartiteState &psi, const ClassifierConfig &cfg = {});
/// Same decision rule on a precomputed vector.
Classification classify_vector(const EntanglementVector &v, const ClassifierConfig &cfg = {});

}  // namespace qtangle
