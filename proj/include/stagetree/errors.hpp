// Error taxonomy shared across the library.  Each class corresponds to one
// process exit code of the command-line tool: validation errors (semantic
// invariant violations) exit 2, routing errors (data that does not fit a
// tree) exit 3, parse errors (malformed files) exit 4.
#pragma once

#include <stdexcept>
#include <string>

namespace stagetree {

// Semantic invariant violation: bad staging, shape mismatch, invalid
// operator target, unusable argument values.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A data record cannot be driven through a tree (no matching edge, record
// too short or too long, ambiguous match).
class RoutingError : public std::runtime_error {
 public:
  explicit RoutingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file: broken JSON, missing document fields, bad CSV.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stagetree
