#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynmand {

/*
 * Typed error channel. The CLI maps these to exit code 2 (user input or
 * mathematical precondition failed, reported as structured JSON); any other
 * exception is an internal error and maps to exit code 1.
 */
class DynError : public std::runtime_error {
  public:
    enum class Kind {
        Hypothesis, /* a mathematical hypothesis of an operation fails   */
        Parse,      /* malformed input text; position() points at it     */
        Cap,        /* a configured resource guard (degree, iterations)  */
        Domain      /* input outside a certified domain of validity      */
    };

    DynError(Kind kind, std::string message, std::size_t position = npos)
        : std::runtime_error(std::move(message)), kind_(kind), position_(position) {}

    Kind kind() const { return kind_; }
    bool has_position() const { return position_ != npos; }
    std::size_t position() const { return position_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const char* kind_name() const {
        switch (kind_) {
        case Kind::Hypothesis: return "hypothesis";
        case Kind::Parse: return "parse";
        case Kind::Cap: return "cap";
        case Kind::Domain: return "domain";
        }
        return "unknown";
    }

  private:
    Kind kind_;
    std::size_t position_;
};

} // namespace dynmand
