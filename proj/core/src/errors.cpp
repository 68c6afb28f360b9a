#include "harpioneer/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace harpioneer {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : Error(fmt::format("{}:{}: {}", source, line, what)), line_(line) {}

SchemaMismatchError::SchemaMismatchError(std::vector<std::string> missing,
                                         std::vector<std::string> extra)
    : Error(fmt::format("feature schema mismatch: missing [{}], extra [{}]",
                        fmt::join(missing, ", "), fmt::join(extra, ", "))),
      missing_(std::move(missing)),
      extra_(std::move(extra)) {}

UnresolvedNameError::UnresolvedNameError(std::string name)
    : Error(fmt::format("no match for '{}'", name)), name_(std::move(name)) {}

AmbiguousNameError::AmbiguousNameError(std::string name, std::vector<std::string> candidates)
    : Error(fmt::format("'{}' is ambiguous: {}", name, fmt::join(candidates, ", "))),
      name_(std::move(name)),
      candidates_(std::move(candidates)) {}

CassetteMissError::CassetteMissError(std::string fingerprint)
    : Error(fmt::format("cassette has no recording for request {}", fingerprint)),
      fingerprint_(std::move(fingerprint)) {}

TransportError::TransportError(int status, const std::string& body_excerpt)
    : Error(fmt::format("HTTP {}: {}", status, body_excerpt)), status_(status) {}

StageError::StageError(std::string stage, const std::string& what)
    : Error(fmt::format("[{}] {}", stage, what)), stage_(std::move(stage)) {}

}  // namespace harpioneer
