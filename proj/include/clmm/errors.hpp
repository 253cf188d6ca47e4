#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clmm {

// Base of every error the engine raises. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (non-positive price, inverted range, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed input data: CSV schema violations, unknown event kinds, duplicate rows.
class DataError : public Error {
public:
    DataError(const std::string& what, long row = -1)
        : Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}

    long row() const noexcept { return row_; }

private:
    long row_;
};

// No hourly USD rate close enough to the requested instant.
class MissingPrice : public DataError {
public:
    MissingPrice(const std::string& token, double time)
        : DataError("no price for " + token + " within the allowed gap of t=" +
                    std::to_string(static_cast<long long>(time))),
          token_(token), time_(time) {}

    const std::string& token() const noexcept { return token_; }
    double time() const noexcept { return time_; }

private:
    std::string token_;
    double time_;
};

struct TimeInterval {
    double begin = 0;
    double end = 0;
};

// A price path does not cover the instants a computation needs.
class PriceGap : public DataError {
public:
    explicit PriceGap(std::vector<TimeInterval> uncovered)
        : DataError(describe(uncovered)), uncovered_(std::move(uncovered)) {}

    const std::vector<TimeInterval>& uncovered() const noexcept { return uncovered_; }

private:
    static std::string describe(const std::vector<TimeInterval>& gaps) {
        std::string s = "price path does not cover:";
        for (const auto& g : gaps) {
            s += " [" + std::to_string(static_cast<long long>(g.begin)) + ", " +
                 std::to_string(static_cast<long long>(g.end)) + "]";
        }
        return s;
    }

    std::vector<TimeInterval> uncovered_;
};

// An observation cannot come from an in-range position (reconstruction solver).
class InconsistentObservation : public Error {
public:
    using Error::Error;
};

}  // namespace clmm
