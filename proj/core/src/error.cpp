#include "adspread/error.hpp"

namespace adspread {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace adspread
