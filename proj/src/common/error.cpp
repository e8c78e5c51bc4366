#include "kgsynth/common/error.hpp"

#include <utility>

namespace kgsynth {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(message), kind_(std::move(kind)) {}

BackendError::BackendError(std::string request_id, const std::string& message)
    : Error("backend", message + " (request " + request_id + ")"),
      request_id_(std::move(request_id)) {}

UnparseableResponseError::UnparseableResponseError(std::string raw, const std::string& message)
    : Error("unparseable_response", message), raw_(std::move(raw)) {}

}  // namespace kgsynth
