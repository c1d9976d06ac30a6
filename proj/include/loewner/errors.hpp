#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loewner {

// Error with a stable machine-readable code plus key=value context.
// diagnostic_line() renders the single-line form used on stderr:
//   code=invalid_density message="..." key=value
class Error : public std::runtime_error {
 public:
  using Context = std::vector<std::pair<std::string, std::string>>;

  Error(std::string code, const std::string& message, Context context = {})
      : std::runtime_error(message),
        code_(std::move(code)),
        context_(std::move(context)) {}

  const std::string& code() const { return code_; }
  const Context& context() const { return context_; }

  std::string diagnostic_line() const {
    std::string line = "code=" + code_ + " message=\"" + what() + "\"";
    for (const auto& [k, v] : context_) line += " " + k + "=" + v;
    return line;
  }

 private:
  std::string code_;
  Context context_;
};

}  // namespace loewner
