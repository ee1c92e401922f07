#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsos {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// label_core
class DuplicateIndex : public Error {
public:
    explicit DuplicateIndex(const std::string& idx) : Error("duplicate index: " + idx), index(idx) {}
    std::string index;
};

class UpgradeKindViolation : public Error {
public:
    explicit UpgradeKindViolation(const std::string& idx)
        : Error("upgrade component must be read-only: " + idx), index(idx) {}
    std::string index;
};

class UnknownIndex : public Error {
public:
    explicit UnknownIndex(const std::string& idx) : Error("unknown index: " + idx), index(idx) {}
    std::string index;
};

class KindMismatch : public Error {
public:
    KindMismatch(const std::string& idx, const std::string& why)
        : Error("component " + idx + ": " + why), index(idx) {}
    std::string index;
};

class NotComposable : public Error {
public:
    NotComposable(const std::string& idx, const std::string& object = {})
        : Error(object.empty() ? "not composable at " + idx
                               : "not composable at " + object + ":" + idx),
          index(idx), object_id(object) {}
    std::string index;
    std::string object_id;
};

// encapsulation
class ConflictingLocalStep : public Error {
public:
    explicit ConflictingLocalStep(const std::string& o)
        : Error("object already constrained by a local step: " + o), object_id(o) {}
    std::string object_id;
};

// uts_core
class DuplicateName : public Error {
public:
    explicit DuplicateName(const std::string& n) : Error("endofunctor already registered: " + n) {}
};

class NamespaceViolation : public Error {
public:
    explicit NamespaceViolation(const std::string& idx)
        : Error("index in the wrong namespace: " + idx), index(idx) {}
    std::string index;
};

class UnknownEndofunctor : public Error {
public:
    explicit UnknownEndofunctor(const std::string& n) : Error("unknown endofunctor: " + n) {}
};

class JumpBeforeFirstStep : public Error {
public:
    JumpBeforeFirstStep() : Error("a computation must start with a step") {}
};

// languages
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t line_, std::size_t column_)
        : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
          line(line_), column(column_) {}
    std::size_t line;
    std::size_t column;
};

class Stuck : public Error {
public:
    explicit Stuck(const std::string& what) : Error("stuck: " + what) {}
};

class InvalidProgram : public Error {
public:
    using Error::Error;
};

// engine
class DepthExceeded : public Error {
public:
    DepthExceeded(std::size_t depth, std::size_t frontier_)
        : Error("exploration depth " + std::to_string(depth) + " exceeded with frontier " +
                std::to_string(frontier_)),
          frontier(frontier_) {}
    std::size_t frontier;
};

}  // namespace dsos
