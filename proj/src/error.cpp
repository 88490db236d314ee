#include "krein/error.hpp"

namespace krein {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::construction: return "construction";
    case ErrorKind::integrability: return "integrability";
    case ErrorKind::domain: return "domain";
    case ErrorKind::resource: return "resource";
    case ErrorKind::argument: return "argument";
    case ErrorKind::representation: return "representation";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::indeterminate_ratio: return "indeterminate-ratio";
    case ErrorKind::pole_proximity: return "pole-proximity";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace krein
