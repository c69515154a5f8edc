#include "artgraph/util/error.hpp"

namespace artgraph {

std::string_view error_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kType: return "type";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kIndex: return "index";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kLeakage: return "leakage";
    case ErrorKind::kUnavailable: return "unavailable";
    case ErrorKind::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace artgraph
