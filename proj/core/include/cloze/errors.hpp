#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloze {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- corpus ----------------------------------------------------------------

class MissingColumnError : public Error {
public:
    explicit MissingColumnError(const std::string& column)
        : Error("missing required column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class MalformedRowError : public Error {
public:
    MalformedRowError(std::size_t line_no, const std::string& detail)
        : Error("malformed row at line " + std::to_string(line_no) + ": " + detail),
          line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class NotUtf8Error : public Error {
public:
    explicit NotUtf8Error(std::size_t line_no)
        : Error("invalid UTF-8 at line " + std::to_string(line_no)), line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class EmptyGroupError : public Error {
public:
    EmptyGroupError() : Error("cannot encode an empty response group") {}
};

class ContextMismatchError : public Error {
public:
    explicit ContextMismatchError(const std::string& sentence_id)
        : Error("conflicting context text for sentence_id '" + sentence_id + "'") {}
};

// ---- entropy / bootstrap ----------------------------------------------------

class ZeroTotalError : public Error {
public:
    ZeroTotalError() : Error("count vector has zero total") {}
};

class EmptyResponsesError : public Error {
public:
    EmptyResponsesError() : Error("sentence has no responses") {}
};

// ---- convergence ------------------------------------------------------------

class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(const std::string& what) : Error(what) {}
};

class TrajectoryTooShortError : public Error {
public:
    TrajectoryTooShortError(std::size_t n, std::size_t required)
        : Error("trajectory of length " + std::to_string(n) +
                " is shorter than required " + std::to_string(required)) {}
};

class EmptyInputError : public Error {
public:
    explicit EmptyInputError(const std::string& what) : Error(what) {}
};

// ---- llm --------------------------------------------------------------------

class AllTokensFilteredError : public Error {
public:
    AllTokensFilteredError() : Error("every token normalized to the empty string") {}
};

class TooFewValidSamplesError : public Error {
public:
    TooFewValidSamplesError(std::size_t dropped, std::size_t total)
        : Error("too few valid samples: " + std::to_string(dropped) + "/" +
                std::to_string(total) + " dropped") {}
};

class BackendError : public Error {
public:
    BackendError(int status, const std::string& body)
        : Error("backend error, status " + std::to_string(status) + ": " + body),
          status_(status), body_(body) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

class LogprobsUnavailableError : public Error {
public:
    LogprobsUnavailableError() : Error("backend response carries no logprobs") {}
};

class MalformedDumpError : public Error {
public:
    MalformedDumpError(std::size_t line_no, const std::string& detail)
        : Error("malformed dump record at line " + std::to_string(line_no) + ": " + detail),
          line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

// ---- metrics ----------------------------------------------------------------

class DegenerateVarianceError : public Error {
public:
    DegenerateVarianceError() : Error("both entropy vectors are constant; CCC undefined") {}
};

class TargetTooLargeError : public Error {
public:
    TargetTooLargeError(std::size_t target, std::size_t available)
        : Error("subsample target " + std::to_string(target) + " exceeds available " +
                std::to_string(available)) {}
};

class UnpairedSentencesError : public Error {
public:
    explicit UnpairedSentencesError(std::vector<std::string> ids)
        : Error(make_message(ids)), ids_(std::move(ids)) {}
    const std::vector<std::string>& ids() const { return ids_; }

private:
    static std::string make_message(const std::vector<std::string>& ids) {
        std::string msg = std::to_string(ids.size()) + " sentence id(s) present on only one side:";
        std::size_t shown = 0;
        for (const auto& id : ids) {
            if (shown++ == 8) { msg += " ..."; break; }
            msg += " " + id;
        }
        return msg;
    }

    std::vector<std::string> ids_;
};

// ---- cli --------------------------------------------------------------------

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace cloze
