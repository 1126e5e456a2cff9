#include "warpsim/error.hpp"

namespace warpsim {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column)
{
}

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error("invalid " + field + ": " + what), field_(std::move(field))
{
}

} // namespace warpsim
