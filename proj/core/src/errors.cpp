#include "parityscope/errors.hpp"

namespace parityscope {

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error("invalid value for '" + field + "': " + message), field_(std::move(field)) {}

}  // namespace parityscope
