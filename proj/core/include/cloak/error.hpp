#pragma once

#include <stdexcept>
#include <string>

namespace cloak {

// Error taxonomy. Input: malformed data handed to an operation; Usage: an
// operation applied outside its contract (e.g. hiding an unobservable
// event); Model: inconsistent models (conflicting event attributes,
// violated synthesis assumptions); Contract: an internal precondition a
// caller was responsible for (e.g. label-nonuniform partition block).
enum class ErrorKind { Input, Usage, Model, Contract };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& m) {
    throw Error(ErrorKind::Input, m);
}
[[noreturn]] inline void throw_usage(const std::string& m) {
    throw Error(ErrorKind::Usage, m);
}
[[noreturn]] inline void throw_model(const std::string& m) {
    throw Error(ErrorKind::Model, m);
}
[[noreturn]] inline void throw_contract(const std::string& m) {
    throw Error(ErrorKind::Contract, m);
}

}  // namespace cloak
