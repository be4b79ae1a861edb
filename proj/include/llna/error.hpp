#pragma once

#include <stdexcept>
#include <string>

namespace llna {

enum class ErrorKind {
    usage,       // bad configuration or arguments
    dependency,  // a required upstream artifact is missing
    data,        // malformed or unusable input data
    parse,       // text that does not follow a grammar (rules, files)
    degenerate,  // input too small or too regular for the requested quantity
    fetch,       // remote source unreachable and nothing cached
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace llna
