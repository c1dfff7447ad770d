#include "normop/common.hpp"

namespace normop {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::NotNormal: return "not-normal";
    case ErrorKind::ModelMismatch: return "model-mismatch";
    case ErrorKind::Partition: return "partition";
    case ErrorKind::DuplicateEigenvalue: return "duplicate-eigenvalue";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Positivity: return "positivity";
    case ErrorKind::Size: return "size";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::InconsistentType: return "inconsistent-type";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Realization: return "realization";
    case ErrorKind::NoAlignment: return "no-alignment";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Separation: return "separation";
    case ErrorKind::EmptySet: return "empty-set";
    case ErrorKind::Input: return "input";
  }
  return "unknown";
}

}  // namespace normop
