#pragma once

#include <stdexcept>
#include <string>

namespace gibbsqc {

// Input text (or a start-state spec) violates a file grammar.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that asks for something impossible,
// e.g. generating a circuit for a starting state of probability zero.
class SemanticError : public std::runtime_error {
 public:
  explicit SemanticError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gibbsqc
