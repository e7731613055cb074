#ifndef BDAR_ERRORS_HPP
#define BDAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdar {

/// Coarse failure class, mapped onto process exit codes by the CLI
/// (usage -> 2, data -> 3, numerical -> 4).
enum class ErrorCategory { usage, data, numerical };

/// All library errors carry a stable machine-readable code (kebab-case)
/// next to the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message)
        : std::runtime_error(message), category_(category), code_(std::move(code)) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorCategory category_;
    std::string code_;
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg)
        : Error(ErrorCategory::data, "insufficient-data", msg) {}
};

struct InvalidDataError : Error {
    explicit InvalidDataError(const std::string& msg)
        : Error(ErrorCategory::data, "invalid-data", msg) {}
};

struct InvalidParamsError : Error {
    explicit InvalidParamsError(const std::string& msg)
        : Error(ErrorCategory::data, "invalid-params", msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg)
        : Error(ErrorCategory::usage, "domain", msg) {}
};

struct DegenerateSeriesError : Error {
    explicit DegenerateSeriesError(const std::string& msg)
        : Error(ErrorCategory::data, "degenerate-series", msg) {}
};

struct ExplosionError : Error {
    explicit ExplosionError(const std::string& msg)
        : Error(ErrorCategory::numerical, "explosion", msg) {}
};

struct CellRejectedError : Error {
    explicit CellRejectedError(const std::string& msg)
        : Error(ErrorCategory::data, "cell-rejected", msg) {}
};

struct SearchFailedError : Error {
    explicit SearchFailedError(const std::string& msg)
        : Error(ErrorCategory::numerical, "search-failed", msg) {}
};

struct SingularityError : Error {
    explicit SingularityError(const std::string& msg)
        : Error(ErrorCategory::numerical, "singular", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg)
        : Error(ErrorCategory::data, "parse", msg) {}
};

struct StudyFailedError : Error {
    explicit StudyFailedError(const std::string& msg)
        : Error(ErrorCategory::numerical, "study-failed", msg) {}
};

} // namespace bdar

#endif
