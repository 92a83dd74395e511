#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

// Base of every error thrown by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class MalformedInput : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class NoConeError : public Error {
public:
    NoConeError(const std::string& what, int degree) : Error(what), degree_(degree) {}
    int degree() const { return degree_; }

private:
    int degree_;
};

}  // namespace hdx
