#include "mdc/error.hpp"

namespace mdc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "E_USAGE";
    case ErrorCode::io: return "E_IO";
    case ErrorCode::disconnected_graph: return "E_DISCONNECTED_GRAPH";
    case ErrorCode::degenerate_kernel: return "E_DEGENERATE_KERNEL";
    case ErrorCode::lambda2_unity: return "E_LAMBDA2_UNITY";
    case ErrorCode::singular_complement: return "E_SINGULAR_COMPLEMENT";
    case ErrorCode::invalid_clustering: return "E_INVALID_CLUSTERING";
    case ErrorCode::eigensolver_failure: return "E_EIGENSOLVER_FAILURE";
  }
  return "E_UNKNOWN";
}

}  // namespace mdc
